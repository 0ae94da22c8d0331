pub mod braiding;
pub mod cycles;
pub mod exactq;
pub mod hyperint;
pub mod registry;
pub mod repcore;
