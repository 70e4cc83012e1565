#![allow(dead_code)]

pub mod minors;
pub mod naive_oracle;
