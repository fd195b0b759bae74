use thiserror::Error;

pub type Result<T> = std::result::Result<T, BorelError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BorelError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation at t = {re}{im:+}i hits the pole at t = {pole}")]
    PoleHit { re: f64, im: f64, pole: f64 },

    #[error("non-finite integrand sample at t = {re}{im:+}i")]
    NonFinite { re: f64, im: f64 },

    #[error(
        "quadrature did not reach tolerance {tol:e} within {nodes} nodes \
         (best estimate {best_re}{best_im:+}i, error {error:e})"
    )]
    NotConverged {
        best_re: f64,
        best_im: f64,
        error: f64,
        tol: f64,
        nodes: usize,
    },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("extrapolation unstable: spread {spread:e} exceeds 10x the last increment {increment:e}")]
    Extrapolation { spread: f64, increment: f64 },

    #[error("z = {re}{im:+}i is outside C_R: Re(1/z) = {re_inv} must exceed 1/R = {inv_r}")]
    OutsideDisk {
        re: f64,
        im: f64,
        re_inv: f64,
        inv_r: f64,
    },

    #[error("series did not converge: {0}")]
    SeriesNotConverged(String),
}
