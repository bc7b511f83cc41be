use crate::error::AnalysisError;

/// Minimum number of envelope points for a fit.
pub const MIN_ENVELOPE_POINTS: usize = 8;
/// Upper bound on the number of logarithmic bins.
pub const MAX_BINS: usize = 32;

/// Power law `A x^p` fitted to the envelope of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub window: (f64, f64),
    pub exponent: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    /// Envelope points used, as `(x, |y|)`.
    pub points: Vec<(f64, f64)>,
}

/// Picks one envelope point per bin.
///
/// Bins grow geometrically across the window (at most [`MAX_BINS`] of them) but are
/// never narrower than the median spacing of consecutive local maxima, so a bin in an
/// oscillating stretch holds a crest. The largest crest represents a bin; a bin without
/// crests (monotone stretch) uses its largest sample.
pub fn envelope(series: &[(f64, f64)], window: (f64, f64)) -> Vec<(f64, f64)> {
    let (xa, xb) = window;
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(x, y)| *x >= xa && *x <= xb && x.is_finite() && y.is_finite())
        .map(|&(x, y)| (x, y.abs()))
        .collect();
    if pts.len() < 3 {
        return pts.into_iter().filter(|p| p.1 > 0.0).collect();
    }
    let peaks: Vec<usize> = (1..pts.len() - 1)
        .filter(|&i| pts[i].1 > pts[i - 1].1 && pts[i].1 >= pts[i + 1].1)
        .collect();
    let mut gaps: Vec<f64> = peaks.windows(2).map(|w| pts[w[1]].0 - pts[w[0]].0).collect();
    gaps.sort_by(f64::total_cmp);
    let width = gaps.get(gaps.len() / 2).copied().unwrap_or(0.0);
    let ratio = (xb / xa).powf(1.0 / MAX_BINS as f64);
    let mut edges = vec![xa];
    loop {
        let last = edges[edges.len() - 1];
        let next = (last * ratio).max(last + width);
        if next >= xb * (1.0 - 1e-12) {
            break;
        }
        edges.push(next);
    }
    // A trailing remainder narrower than a bin joins the previous bin.
    let last = edges[edges.len() - 1];
    if edges.len() > 1 && xb - last < (last * ratio - last).max(width) {
        edges.pop();
    }
    let mut is_peak = vec![false; pts.len()];
    for &i in &peaks {
        is_peak[i] = true;
    }
    let mut out = Vec::with_capacity(edges.len());
    let mut start = 0;
    for k in 0..edges.len() {
        let hi = edges.get(k + 1).copied().unwrap_or(f64::INFINITY);
        let mut end = start;
        while end < pts.len() && pts[end].0 < hi {
            end += 1;
        }
        let slice = start..end;
        let best_peak = slice.clone().filter(|&i| is_peak[i]).max_by(|&i, &j| pts[i].1.total_cmp(&pts[j].1));
        let best = best_peak.or_else(|| slice.clone().max_by(|&i, &j| pts[i].1.total_cmp(&pts[j].1)));
        if let Some(i) = best {
            if pts[i].1 > 0.0 {
                out.push(pts[i]);
            }
        }
        start = end;
    }
    out
}

/// Least-squares slope of `ln|y|` against `ln x` over the envelope in `window`.
pub fn fit_power_law(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit, AnalysisError> {
    let (xa, xb) = window;
    if !(xa > 0.0 && xb > xa && xb.is_finite()) {
        return Err(AnalysisError::InvalidWindow(xa, xb));
    }
    let points = envelope(series, window);
    if points.len() < MIN_ENVELOPE_POINTS {
        return Err(AnalysisError::InsufficientData { found: points.len(), needed: MIN_ENVELOPE_POINTS });
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let p = sxy / sxx;
    let intercept = my - p * mx;
    let sse: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - p * x).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(DecayFit {
        window,
        exponent: p,
        amplitude: intercept.exp(),
        r_squared,
        points,
    })
}
