//! Exact computations on the lattice of subspaces of `F_q^N`: cover
//! relations, the algebra they generate, its irreducible modules and the
//! quantum affine action built from them.

pub mod algebra;
pub mod combin;
pub mod exactnum;
pub mod gf;
pub mod lattice;
pub mod linalg;
pub mod qaffine;
