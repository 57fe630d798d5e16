pub mod classifier;
pub mod cli;
pub mod engine;
pub mod level;
pub mod minmod;
pub mod qseries;
pub mod scalars;
pub mod weights;
