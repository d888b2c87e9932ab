pub mod arith;
pub mod bounds;
pub mod casegen;
pub mod catalog;
pub mod classpoly;
pub mod eliminate;
pub mod error;
pub mod jfunc;
pub mod pipeline;
pub mod poly;
pub mod quadforms;
pub mod tables;

pub use error::{Error, Result};
