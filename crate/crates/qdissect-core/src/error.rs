use core::fmt;

/// Errors surfaced by series, theta, and lattice operations.
///
/// Display strings are part of the public interface: the CLI prints them
/// verbatim and tests match on them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inversion requires the lowest-order coefficient to be a unit (+1/-1).
    NonInvertibleSeries,
    /// Pochhammer offsets must satisfy `1 <= a <= m-1` for pair factors
    /// (`a = m` for single Euler factors) with `m >= 1`.
    InvalidPochhammerParameters,
    /// A theta spec `f(a, b)` needs `a.exp + b.exp > 0` to converge.
    DivergentThetaSpec,
    /// `theta_product` handles nonnegative exponents only; evaluate via the
    /// series form instead.
    UseSeriesForm,
    /// `product_split` requires the two specs to satisfy `a*b = c*d`.
    ProductIdentityPreconditionViolated,
    /// Lattice sums encode unsigned theta pairs; signed arguments have no
    /// quadratic-form counterpart here.
    SignedLatticeSumsUnsupported,
    /// Residue `r` must satisfy `0 <= r < t` with `t >= 1`.
    ResidueOutOfRange,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Error::NonInvertibleSeries => "non-invertible series",
            Error::InvalidPochhammerParameters => "invalid Pochhammer parameters",
            Error::DivergentThetaSpec => "divergent theta spec",
            Error::UseSeriesForm => "use series form",
            Error::ProductIdentityPreconditionViolated => {
                "product identity precondition violated"
            }
            Error::SignedLatticeSumsUnsupported => "signed lattice sums unsupported",
            Error::ResidueOutOfRange => "residue out of range",
        };
        f.write_str(msg)
    }
}
