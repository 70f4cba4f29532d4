use super::{BallBodyResult, SupportPiece, TAU};

/// Symmetric Hausdorff distance between two planar convex results.
///
/// For compact convex sets the distance equals `max_u |h_A(u) - h_B(u)|`.
/// Both support functions are piecewise of the form `<w, u> + c`, so on each
/// common piece the difference is `a cos t + b sin t + c` and its extreme
/// values are found exactly at the piece ends or the stationary angles.
///
/// `Empty` is at distance 0 from `Empty` and `+inf` from anything else.
pub fn hausdorff_distance(a: &BallBodyResult, b: &BallBodyResult) -> f64 {
    match (a.support_pieces(), b.support_pieces()) {
        (None, None) => 0.0,
        (None, _) | (_, None) => f64::INFINITY,
        (Some(pa), Some(pb)) => max_abs_difference(&normalize(pa), &normalize(pb)),
    }
}

/// Re-bases a full-turn piece list onto `[0, 2pi)`, splitting the piece that
/// straddles the cut.
fn normalize(pieces: Vec<SupportPiece>) -> Vec<SupportPiece> {
    let mut out = Vec::with_capacity(pieces.len() + 2);
    for p in pieces {
        let shift = (p.from / TAU).floor() * TAU;
        let (from, to) = (p.from - shift, p.to - shift);
        if to <= TAU {
            out.push(SupportPiece { from, to, ..p });
        } else {
            out.push(SupportPiece { from, to: TAU, ..p });
            out.push(SupportPiece {
                from: 0.0,
                to: (to - TAU).min(TAU),
                ..p
            });
        }
    }
    out.sort_by(|x, y| x.from.total_cmp(&y.from));
    out
}

fn piece_at(pieces: &[SupportPiece], theta: f64) -> &SupportPiece {
    // last piece starting at or before theta; pieces cover [0, 2pi)
    let idx = pieces.partition_point(|p| p.from <= theta);
    &pieces[idx.saturating_sub(1)]
}

fn max_abs_difference(pa: &[SupportPiece], pb: &[SupportPiece]) -> f64 {
    let mut cuts: Vec<f64> = pa
        .iter()
        .chain(pb)
        .flat_map(|p| [p.from, p.to])
        .filter(|t| (0.0..=TAU).contains(t))
        .collect();
    cuts.push(0.0);
    cuts.push(TAU);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut worst: f64 = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= 0.0 {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let x = piece_at(pa, mid);
        let y = piece_at(pb, mid);
        let d = x.anchor - y.anchor;
        let c = x.offset - y.offset;
        let f = |t: f64| d.x * t.cos() + d.y * t.sin() + c;
        worst = worst.max(f(lo).abs()).max(f(hi).abs());
        let crit = d.y.atan2(d.x);
        for cand in [crit, crit + std::f64::consts::PI] {
            let t = cand.rem_euclid(TAU);
            if t > lo && t < hi {
                worst = worst.max(f(t).abs());
            }
        }
    }
    worst
}
