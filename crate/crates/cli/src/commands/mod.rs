pub mod bounds;
pub mod curves;
pub mod simulate;
pub mod verify;
