pub mod central;
pub mod ideal;
pub mod instances;
pub mod msphere;
pub mod parse;
pub mod poly;
pub mod qform;
pub mod quat;
pub mod report;
pub mod scalar;
