//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Semi-infinite ranges are truncated at `a + max(50/decay_rate, 100)`, which
//! is safe for integrands that decay at least like `exp(-decay_rate·x)`.
//! Integrable singularities at the lower endpoint (logarithmic or weaker
//! power-law) are handled by the substitution `x = a + w·exp(-t)` on the first
//! unit of the range, turning them into exponentially decaying tails in `t`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{ToleranceConfig, QUAD_SUBDIVISIONS_PER_ITERATION};
use crate::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Length of the substituted `t` range for singular lower endpoints.
/// `exp(-100)` is far below any representable contribution.
const SINGULAR_T_MAX: f64 = 100.0;

/// Upper end of an integration range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperLimit {
    Finite(f64),
    /// `+∞` for an integrand decaying like `exp(-decay_rate·x)`.
    Infinite {
        decay_rate: f64,
    },
}

/// Behaviour of the integrand at the lower endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerEndpoint {
    Regular,
    /// Integrable singularity (e.g. `ln x` or `x^{-1/2}`) at the lower limit.
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Truncation point for a semi-infinite range starting at `a`.
pub(crate) fn tail_cutoff(a: f64, decay_rate: f64) -> f64 {
    a + (50.0 / decay_rate).max(100.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Piece {
    /// Integrate `f(x)` directly.
    Direct,
    /// Integrate `f(a + w·e^{-t})·w·e^{-t}` over `t`.
    Mapped { a: f64, w: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    piece: Piece,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    #[allow(clippy::needless_range_loop)]
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    let abs_half = half.abs();
    (
        res_k * half,
        rescale_error(err, res_abs * abs_half, res_asc * abs_half),
    )
}

/// Integrates `f` from `a` to `upper` to relative accuracy `tol.quad_target`
/// (or absolute accuracy `tol.abs_tol` for integrals near zero).
///
/// On non-convergence the error carries the best estimate and its error bound.
pub fn adaptive_quadrature<F>(
    f: F,
    a: f64,
    upper: UpperLimit,
    lower: LowerEndpoint,
    tol: &ToleranceConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    tol.validate()?;
    let b = match upper {
        UpperLimit::Finite(b) => b,
        UpperLimit::Infinite { decay_rate } => {
            if !(decay_rate.is_finite() && decay_rate > 0.0) {
                return Err(Error::domain(format!(
                    "decay rate must be positive and finite, got {decay_rate}"
                )));
            }
            tail_cutoff(a, decay_rate)
        }
    };
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if b < a {
        return adaptive_quadrature(f, b, UpperLimit::Finite(a), lower, tol).map(|mut r| {
            r.value = -r.value;
            r
        });
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }

    let eval = |piece: Piece, x: f64| -> f64 {
        match piece {
            Piece::Direct => f(x),
            Piece::Mapped { a, w } => {
                let s = w * (-x).exp();
                if s == 0.0 {
                    0.0
                } else {
                    f(a + s) * s
                }
            }
        }
    };

    let mut initial = Vec::with_capacity(2);
    match lower {
        LowerEndpoint::Regular => initial.push((a, b, Piece::Direct)),
        LowerEndpoint::Singular => {
            let w = (b - a).min(1.0);
            initial.push((0.0, SINGULAR_T_MAX, Piece::Mapped { a, w }));
            if a + w < b {
                initial.push((a + w, b, Piece::Direct));
            }
        }
    }

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for (lo, hi, piece) in initial {
        let (value, error) = kronrod15(&|x| eval(piece, x), lo, hi);
        evaluations += 15;
        heap.push(Segment {
            lo,
            hi,
            value,
            error,
            piece,
        });
    }

    let limit = tol.max_iterations * QUAD_SUBDIVISIONS_PER_ITERATION;
    loop {
        // Re-summing keeps the totals free of accumulated cancellation.
        let (total, total_err) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::numerical(
                "integrand produced a non-finite value",
                total,
                total_err,
            ));
        }
        if total_err <= (tol.quad_target * total.abs()).max(tol.abs_tol) {
            return Ok(QuadratureResult {
                value: total,
                error_estimate: total_err,
                evaluations,
            });
        }
        if heap.len() >= limit {
            return Err(Error::numerical(
                format!("quadrature did not converge within {limit} subintervals"),
                total,
                total_err,
            ));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            return Err(Error::numerical(
                "quadrature subinterval reached machine resolution",
                total,
                total_err,
            ));
        }
        let g = |x| eval(worst.piece, x);
        for (lo, hi) in [(worst.lo, mid), (mid, worst.hi)] {
            let (value, error) = kronrod15(&g, lo, hi);
            evaluations += 15;
            heap.push(Segment {
                lo,
                hi,
                value,
                error,
                piece: worst.piece,
            });
        }
    }
}
