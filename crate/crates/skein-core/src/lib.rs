#![cfg_attr(not(feature = "std"), no_std)]
//! Loop-segment orderings and positive quantum traces on triangulated surfaces.

extern crate alloc;

pub mod lamination;
pub mod ordering;
pub mod qtorus;
pub mod surface;
pub mod trace;
