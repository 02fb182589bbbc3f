//! Matrix types and constructors for every matrix family, plus the explicit
//! similarity transforms that relate them.

mod dense;
mod families;
mod similarity;
mod weights;

pub use dense::{DenseMatrix, DenseSymMatrix};
pub use families::{
    copson_l_matrix, copson_multipliers, generalized_kernel, gram_beta, gram_gamma,
    hadamard_product, hilbert_matrix, m_alpha_entry, m_alpha_matrix, mv_skew_matrix,
    n_alpha_matrix, power_mean, power_mean_kernel, schur_x_matrix, weighted_mean_matrix,
    KernelOrder,
};
pub use similarity::{
    conjugate_gamma, conjugate_n_alpha, e_inverse, e_matrix, f_diagonal, g_diagonal, h_inverse,
    h_matrix,
};
pub use weights::{SpacedSequence, WeightSequence};

/// Largest dimension accepted by the command-line front end.
pub const MAX_DIM: usize = 8192;
