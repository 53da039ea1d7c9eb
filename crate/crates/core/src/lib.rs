pub mod hydro;
pub mod fcu;
pub mod guidance;
pub mod harness;
pub mod link;
pub mod mavproto;
pub mod percept;
pub mod rng;
pub mod selftest;
