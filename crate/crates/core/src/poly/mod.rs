//! Exact polynomial arithmetic, real-root analysis and the Fischer-Fock
//! inner product.

pub mod multi;
pub mod roots;
pub mod uni;

pub use multi::{indices_below, index_le, multi_factorial, Exponent, MultiPoly};
pub use roots::{
    find_real_root, isolate_real_roots, nonneg_on_r, positive_on_r, rational_root_in,
    squarefree_decompose, sturm_count, count_real_roots, CountRange, IsolatedRoot, RealPoint, RootIsolation,
    SquarefreeDecomposition, SturmChain,
};
pub use uni::{ArithOp, UniPoly};
