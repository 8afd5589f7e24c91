pub mod certify;
pub mod family;
pub mod measure;
pub mod selftest;
pub mod transform;
