//! Exact computations of functor homology over finite categories and of twisted
//! homology of finite classical groups.

pub mod cli;
pub mod comparison;
pub mod exactla;
pub mod fincat;
pub mod funrep;
pub mod grouphom;
pub mod homalg;
pub mod mobius;
pub mod predict;
pub mod spans;
