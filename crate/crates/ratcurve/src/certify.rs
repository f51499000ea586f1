//! Executable certificates: the uniform point bound `deg * q^dim`, the
//! morphism-space bounds built from Bezout degree products, log-log slope
//! fitting of counts against field size, and the end-to-end check that the
//! measured bounded-height counts stay below their bounds.

use num_bigint::BigUint;
use thiserror::Error;

use crate::morspace::{self, CountSeries, EngineConfig, MorError};
use crate::variety::VarietySpec;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("need at least {needed} usable samples, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },
    #[error(transparent)]
    Mor(#[from] MorError),
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum CertKind {
    PointBound,
    MorBound,
    DpWeightedBound,
}

impl CertKind {
    pub fn name(self) -> &'static str {
        match self {
            CertKind::PointBound => "point-bound",
            CertKind::MorBound => "mor-bound",
            CertKind::DpWeightedBound => "dp-weighted-bound",
        }
    }
}

/// An exact integer comparison of a measured count against a closed-form
/// bound. `pass` holds iff `measured <= bound`.
#[derive(Clone, Debug)]
pub struct BoundCertificate {
    pub kind: CertKind,
    pub description: String,
    pub bound: BigUint,
    pub measured: u64,
    pub pass: bool,
}

impl BoundCertificate {
    fn new(kind: CertKind, description: String, bound: BigUint, measured: u64) -> Self {
        let pass = BigUint::from(measured) <= bound;
        BoundCertificate {
            kind,
            description,
            bound,
            measured,
            pass,
        }
    }
}

/// The uniform point bound: a locally closed subset of affine space of the
/// given degree and dimension has at most `deg * q^dim` rational points.
pub fn point_bound(deg: u64, dim: u32, q: u64, measured: u64) -> BoundCertificate {
    let bound = BigUint::from(deg) * BigUint::from(q).pow(dim);
    BoundCertificate::new(
        CertKind::PointBound,
        format!("deg {deg} * q^{dim} at q={q}"),
        bound,
        measured,
    )
}

/// Morphism-count bound for a union of components of projective dimension
/// `dim_z` inside the degree-`e` section space.
///
/// Unweighted ambient: `2 (prod d_i) C^e q^{dim_z}`, the affine-cone degree
/// product combined with the `#Z <= (2/q) #cone` step. Weighted ambient: the
/// cone comparison is used directly, giving
/// `(prod d_i^{d_i e + 1}) q^{dim_z + 1}`.
pub fn mor_bound(spec: &VarietySpec, e: u32, dim_z: i64, q: u64, measured: u64) -> BoundCertificate {
    let dims = dim_z.max(0) as u32;
    if spec.is_weighted() {
        let bound = spec.cone_degree_bound(e) * BigUint::from(q).pow(dims + 1);
        BoundCertificate::new(
            CertKind::DpWeightedBound,
            format!(
                "prod d_i^(d_i e + 1) * q^(dimZ+1) at e={e}, dimZ={dim_z}, q={q}"
            ),
            bound,
            measured,
        )
    } else {
        let prod_d: BigUint = spec
            .degrees()
            .iter()
            .fold(BigUint::from(1u32), |acc, &d| acc * BigUint::from(d));
        let bound = BigUint::from(2u32)
            * prod_d
            * spec.bezout_constant().pow(e)
            * BigUint::from(q).pow(dims);
        BoundCertificate::new(
            CertKind::MorBound,
            format!("2 (prod d_i) C^e q^dimZ at e={e}, dimZ={dim_z}, q={q}"),
            bound,
            measured,
        )
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum FitVerdict {
    Consistent,
    Excess,
    Deficient,
}

impl FitVerdict {
    pub fn name(self) -> &'static str {
        match self {
            FitVerdict::Consistent => "consistent",
            FitVerdict::Excess => "excess",
            FitVerdict::Deficient => "deficient",
        }
    }
}

/// Least-squares fit of `log(count)` against `log(Q)`: the slope is an
/// empirical dimension estimate.
#[derive(Clone, Debug)]
pub struct DimFit {
    /// The samples actually used (zero counts are excluded).
    pub samples: Vec<(u64, u64)>,
    /// Samples dropped because the count was zero.
    pub excluded_zero: Vec<u64>,
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals of the fit.
    pub residual: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub verdict: FitVerdict,
}

/// Fit a power law through `(Q, count)` samples and compare the exponent with
/// an expected dimension. Default tolerance 0.6 separates adjacent integer
/// dimensions for Q >= 5 given the `O(Q^(-1/2))` fluctuation of point counts.
pub const DEFAULT_SLOPE_TOLERANCE: f64 = 0.6;

pub fn lang_weil_fit(
    samples: &[(u64, u64)],
    expected: f64,
    tolerance: f64,
) -> Result<DimFit, CertifyError> {
    let excluded_zero: Vec<u64> = samples
        .iter()
        .filter(|(_, c)| *c == 0)
        .map(|(q, _)| *q)
        .collect();
    let used: Vec<(u64, u64)> = samples.iter().copied().filter(|(_, c)| *c > 0).collect();
    if used.len() < 2 {
        return Err(CertifyError::NotEnoughSamples {
            needed: 2,
            got: used.len(),
        });
    }
    let pts: Vec<(f64, f64)> = used
        .iter()
        .map(|&(q, c)| ((q as f64).ln(), (c as f64).ln()))
        .collect();
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let var_x = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    let cov = pts
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum::<f64>();
    let slope = cov / var_x;
    let intercept = mean_y - slope * mean_x;
    let residual = pts
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum::<f64>();
    let verdict = if (slope - expected).abs() <= tolerance {
        FitVerdict::Consistent
    } else if slope > expected {
        FitVerdict::Excess
    } else {
        FitVerdict::Deficient
    };
    Ok(DimFit {
        samples: used,
        excluded_zero,
        slope,
        intercept,
        residual,
        expected,
        tolerance,
        verdict,
    })
}

/// The full bounded-height pipeline result: the measured series together with
/// per-degree and cumulative bound certificates.
pub struct TheoremReport {
    pub series: CountSeries,
    pub per_degree: Vec<BoundCertificate>,
    pub cumulative: Vec<BoundCertificate>,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.per_degree.iter().all(|c| c.pass) && self.cumulative.iter().all(|c| c.pass)
    }
}

/// Check the del Pezzo counting bound end to end on a surface model
/// (`dim X = 2`): every per-degree count `#Mor_U(e)` must stay below the
/// bound with `dimZ = e + 2`, and the cumulative counts below the partial
/// sums of the bounds.
pub fn theorem_check(
    spec: &VarietySpec,
    e_max: u32,
    exclusions: &[Vec<crate::forms::MultiForm>],
    exclusion_mode: String,
    cfg: &EngineConfig,
) -> Result<TheoremReport, CertifyError> {
    let series = morspace::count_points_bounded_height(
        spec,
        e_max,
        1,
        exclusions,
        exclusion_mode,
        cfg,
    )?;
    let report = attach_bounds(spec, series);
    Ok(report)
}

/// Attach per-degree and cumulative certificates to a measured series. The
/// per-degree dimension is `e + dim X` (the expected dimension of the
/// off-accumulator components in the anticanonical normalization).
pub fn attach_bounds(spec: &VarietySpec, series: CountSeries) -> TheoremReport {
    let q = series.base_q;
    let dim_x = spec.dim_x();
    let per_degree: Vec<BoundCertificate> = series
        .degrees
        .iter()
        .map(|d| mor_bound(spec, d.e, d.e as i64 + dim_x, q, d.n_u))
        .collect();
    let mut cumulative = Vec::new();
    let mut bound_sum = BigUint::from(0u32);
    for (i, d) in series.degrees.iter().enumerate() {
        bound_sum += per_degree[i].bound.clone();
        let measured = series.cumulative[i].1;
        cumulative.push(BoundCertificate::new(
            per_degree[i].kind,
            format!("cumulative N_U(q^{}) against partial bound sums", d.e),
            bound_sum.clone(),
            measured,
        ));
    }
    TheoremReport {
        series,
        per_degree,
        cumulative,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::field::Field;
    use crate::variety::preset;

    #[test]
    fn point_bound_examples() {
        // Hyperplane in A^N: met with equality.
        let c = point_bound(1, 2, 5, 25);
        assert!(c.pass);
        assert_eq!(c.bound, BigUint::from(25u32));
        // V(xy) in A^2: 2q - 1 <= 2q.
        let c = point_bound(2, 1, 7, 13);
        assert!(c.pass);
        // Empty set: degree 0.
        let c = point_bound(0, 3, 5, 0);
        assert!(c.pass);
        assert_eq!(c.bound, BigUint::from(0u32));
        let c = point_bound(0, 3, 5, 1);
        assert!(!c.pass);
    }

    #[test]
    fn mor_bound_examples() {
        let f2 = Arc::new(Field::prime(2).unwrap());
        let cubic = preset("dp3-fermat", f2).unwrap();
        let c = mor_bound(&cubic, 2, 4, 2, 0);
        assert_eq!(c.bound, BigUint::from(69984u32)); // 2*3*27^2*2^4

        let f3 = Arc::new(Field::prime(3).unwrap());
        let dp2 = preset("dp2", f3).unwrap();
        let c = mor_bound(&dp2, 1, 3, 3, 0);
        // 4^(4e+1) q^(e+3) = 4^5 * 3^4
        assert_eq!(c.bound, BigUint::from(1024u32 * 81u32));
        assert_eq!(c.kind, CertKind::DpWeightedBound);

        let dp1 = preset("dp1", Arc::new(Field::prime(2).unwrap())).unwrap();
        let c = mor_bound(&dp1, 1, 3, 2, 0);
        // 6^7 * 2^4
        assert_eq!(c.bound, BigUint::from(6u64.pow(7) * 16));
    }

    #[test]
    fn mor_bound_is_monotone() {
        let f3 = Arc::new(Field::prime(3).unwrap());
        let cubic = preset("dp3-fermat", f3).unwrap();
        let mut prev = BigUint::from(0u32);
        for e in 1..=6 {
            let c = mor_bound(&cubic, e, e as i64 + 2, 3, 0);
            assert!(c.bound > prev);
            prev = c.bound;
        }
        let small_q = mor_bound(&cubic, 2, 4, 2, 0).bound;
        let large_q = mor_bound(&cubic, 2, 4, 5, 0).bound;
        assert!(small_q < large_q);
        let small_dim = mor_bound(&cubic, 2, 3, 3, 0).bound;
        let large_dim = mor_bound(&cubic, 2, 5, 3, 0).bound;
        assert!(small_dim < large_dim);
    }

    #[test]
    fn exact_power_law_recovers_exponent() {
        let samples: Vec<(u64, u64)> = [5u64, 7, 11]
            .iter()
            .map(|&q| (q, 3 * q.pow(3)))
            .collect();
        let fit = lang_weil_fit(&samples, 3.0, 0.6).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-9);
        assert!(fit.residual < 1e-18);
        assert_eq!(fit.verdict, FitVerdict::Consistent);
    }

    #[test]
    fn constant_counts_have_zero_slope() {
        let samples: Vec<(u64, u64)> = vec![(5, 7), (7, 7), (11, 7)];
        let fit = lang_weil_fit(&samples, 0.0, 0.6).unwrap();
        assert!(fit.slope.abs() < 1e-9);
    }

    #[test]
    fn zero_counts_are_excluded_and_reported() {
        let samples: Vec<(u64, u64)> = vec![(5, 0), (7, 49), (11, 121)];
        let fit = lang_weil_fit(&samples, 2.0, 0.6).unwrap();
        assert_eq!(fit.excluded_zero, vec![5]);
        assert_eq!(fit.samples.len(), 2);
        assert!(matches!(
            lang_weil_fit(&[(5, 0), (7, 0), (11, 3)], 1.0, 0.6),
            Err(CertifyError::NotEnoughSamples { .. })
        ));
    }

    #[test]
    fn theorem_check_small_cubic_surface() {
        let f2 = Arc::new(Field::prime(2).unwrap());
        let spec = preset("dp3-fermat", f2).unwrap();
        let report = theorem_check(
            &spec,
            1,
            &[],
            "none".into(),
            &EngineConfig::default(),
        )
        .unwrap();
        assert!(report.all_pass());
        assert_eq!(report.per_degree.len(), 2);
    }
}
