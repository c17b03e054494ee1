pub mod charclass;
pub mod cli;
pub mod constructors;
pub mod decide;
pub mod fgab;
pub mod json;
pub mod topology;
