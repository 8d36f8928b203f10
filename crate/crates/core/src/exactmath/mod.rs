//! Exact arithmetic: prime fields, dense linear algebra over `F_p`, integer
//! lattice kernels, and homogeneous polynomial plumbing.

pub mod field;
pub mod forms;
pub mod fpmatrix;
pub mod intmatrix;
pub mod poly;

pub use field::{certification_fields, find_field, is_prime, PrimeField, Zp};
pub use forms::{BinForm, HomForm3};
pub use fpmatrix::{kernel_fp, FpMatrix};
pub use intmatrix::{integer_kernel, IntMatrix};
pub use poly::Poly;
