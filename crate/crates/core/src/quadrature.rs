//! Adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::exec::{pairwise_sum, Execution};

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

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_depth: 40,
            max_intervals: 20_000,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .total_cmp(&o.error)
            .then_with(|| o.a.total_cmp(&self.a))
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let (k, g) = (kron * h, gauss * h);
    if !k.is_finite() {
        return Err(Error::NonFinite("quadrature integrand"));
    }
    Ok((k, (k - g).abs()))
}

/// Integrate `f` over `[a, b]` by global adaptive bisection of the segment
/// with the largest error estimate.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (v, e) = gk15(&mut f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v,
        error: e,
        depth: 0,
    });
    let mut total = v;
    let mut total_err = e;
    // segments that hit the depth limit and are frozen
    let mut frozen: Vec<Segment> = Vec::new();

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        let Some(seg) = heap.pop() else {
            return Err(Error::QuadratureNonConvergence {
                error_estimate: total_err,
                target,
            });
        };
        if seg.depth >= opts.max_depth || heap.len() + frozen.len() >= opts.max_intervals {
            frozen.push(seg);
            continue;
        }
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1) = gk15(&mut f, seg.a, mid)?;
        let (v2, e2) = gk15(&mut f, mid, seg.b)?;
        evaluations += 30;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
            depth: seg.depth + 1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
            depth: seg.depth + 1,
        });
    }

    // Re-sum from the final partition in position order so the value does not
    // carry the running-update rounding.
    let mut segs: Vec<Segment> = heap.into_vec();
    segs.extend(frozen);
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let values: Vec<f64> = segs.iter().map(|s| s.value).collect();
    let errors: Vec<f64> = segs.iter().map(|s| s.error).collect();
    Ok(QuadResult {
        value: pairwise_sum(&values),
        error: pairwise_sum(&errors),
        evaluations,
    })
}

/// Split `[a, b]` into `panels` equal panels, integrate each adaptively
/// (possibly in parallel) and combine them by pairwise summation.
pub fn integrate_panels<F>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    opts: &QuadOptions,
    exec: Execution,
) -> Result<QuadResult>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let panels = panels.max(1);
    let edges: Vec<(f64, f64)> = (0..panels)
        .map(|k| {
            let lo = a + (b - a) * k as f64 / panels as f64;
            let hi = if k + 1 == panels {
                b
            } else {
                a + (b - a) * (k + 1) as f64 / panels as f64
            };
            (lo, hi)
        })
        .collect();
    // Per-panel tolerances are absolute; the caller's relative target is
    // applied against a first coarse pass so panels agree on one threshold.
    let coarse = exec.map(&edges, |&(lo, hi)| gk15(&mut |x| f(x), lo, hi).map(|r| r.0));
    let coarse: Result<Vec<f64>> = coarse.into_iter().collect();
    let scale = pairwise_sum(&coarse?).abs();
    let panel_abs = opts.abs_tol.max(opts.rel_tol * scale) / panels as f64;
    let panel_opts = QuadOptions {
        abs_tol: panel_abs,
        rel_tol: 0.0,
        ..*opts
    };
    let parts = exec.map(&edges, |&(lo, hi)| integrate(&f, lo, hi, &panel_opts));
    let parts: Result<Vec<QuadResult>> = parts.into_iter().collect();
    let parts = parts?;
    let values: Vec<f64> = parts.iter().map(|r| r.value).collect();
    let errors: Vec<f64> = parts.iter().map(|r| r.error).collect();
    Ok(QuadResult {
        value: pairwise_sum(&values),
        error: pairwise_sum(&errors),
        evaluations: parts.iter().map(|r| r.evaluations).sum(),
    })
}
