//! Chern-Simons functions of quivers with potential, cyclic L-infinity
//! algebras, and motivic Donaldson-Thomas generating series, together with an
//! exact finite-field point-counting oracle for every identity.

pub mod motive;
pub mod poly;
pub mod linfty;
pub mod quiver;
pub mod repvar;
pub mod dtseries;
