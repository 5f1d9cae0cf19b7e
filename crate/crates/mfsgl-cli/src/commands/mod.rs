pub mod eval;
pub mod fit;
pub mod select;
pub mod synth;
pub mod sweep;
