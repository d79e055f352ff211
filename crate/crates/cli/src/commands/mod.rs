pub mod converge;
pub mod run;
pub mod verify;
