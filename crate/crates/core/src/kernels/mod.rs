//! Correlation kernels in three forms: the Christoffel-Darboux quotient, the
//! biorthogonal sum over a chain of multi-indices, and the double contour
//! integral evaluated by quadrature.

mod checks;
mod contour;
mod model;

pub use checks::{
    check_biorthogonality, check_dxdy_identity, correlation_det, correlation_det_with, determinant,
    dxdy_richardson, trace_integral, DxDyResidual, DxDyRichardson,
};
pub use contour::{
    default_geometry, eval_contour, eval_contour_adaptive, eval_contour_hermite,
    eval_contour_laguerre, ContourGeometry, ContourValue, DEFAULT_CONTOUR_NODES, MAX_CONTOUR_NODES,
};
pub use model::{
    build_kernel, eval_sum, kernel_report, KernelModel, KernelValueReport, Neighbor, SumKernel,
    DIAGONAL_THRESHOLD,
};
