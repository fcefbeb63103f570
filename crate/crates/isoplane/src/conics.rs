//! Exact piecewise-linear taxicab conics and sampled lp unit circles.
//!
//! Taxicab distance sums are affine on each cell of the plane partition cut
//! by the axis-parallel lines through the foci, so circle, ellipse, and
//! hyperbola loci are assembled exactly from per-cell segments — no
//! approximation beyond f64 arithmetic. Unbounded hyperbola branches are
//! clipped to a caller-supplied box.

use crate::error::{Error, Result};
use crate::metrics::{taxicab_distance, Metric, Point};
use crate::vecn;

type P2 = [f64; 2];

/// A polygonal locus: one closed convex chain, or a set of open polylines
/// (hyperbola branches).
#[derive(Debug, Clone, PartialEq)]
pub enum PolyShape {
    /// At least 3 vertices, no consecutive duplicates; the closing edge
    /// from last back to first is implied.
    ClosedPolygon(Vec<Point>),
    /// Each chain has at least 2 points.
    OpenPolylineSet(Vec<Vec<Point>>),
}

impl PolyShape {
    pub fn chains(&self) -> Vec<&[Point]> {
        match self {
            PolyShape::ClosedPolygon(chain) => vec![chain.as_slice()],
            PolyShape::OpenPolylineSet(chains) => chains.iter().map(Vec::as_slice).collect(),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, PolyShape::ClosedPolygon(_))
    }
}

/// Axis-aligned clip window for unbounded loci.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Default for BoundingBox {
    fn default() -> Self {
        Self {
            min_x: -10.0,
            min_y: -10.0,
            max_x: 10.0,
            max_y: 10.0,
        }
    }
}

impl BoundingBox {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self> {
        if ![min_x, min_y, max_x, max_y].iter().all(|v| v.is_finite())
            || min_x >= max_x
            || min_y >= max_y
        {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(Self {
            min_x,
            min_y,
            max_x,
            max_y,
        })
    }
}

fn p2(p: &Point) -> P2 {
    [p[0], p[1]]
}

fn require_planar(p: &Point) -> Result<()> {
    if p.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            found: p.dim(),
        });
    }
    Ok(())
}

/// The taxicab circle: a diamond with vertices one radius out along each
/// axis, counterclockwise from the rightmost vertex.
pub fn taxicab_circle(center: &Point, radius: f64) -> Result<PolyShape> {
    require_planar(center)?;
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::NonpositiveRadius(radius));
    }
    let (cx, cy) = (center[0], center[1]);
    Ok(PolyShape::ClosedPolygon(vec![
        Point::xy(cx + radius, cy),
        Point::xy(cx, cy + radius),
        Point::xy(cx - radius, cy),
        Point::xy(cx, cy - radius),
    ]))
}

/// The taxicab ellipse `{x : d(x, f1) + d(x, f2) = s}`: a convex polygon
/// with 4, 6, or 8 vertices, counterclockwise from the lowest-then-leftmost
/// vertex.
///
/// `s` must strictly exceed the focal distance: at equality the locus is
/// the filled axis-parallel rectangle spanned by the foci, which a polygon
/// boundary cannot faithfully represent.
pub fn taxicab_ellipse(f1: &Point, f2: &Point, s: f64) -> Result<PolyShape> {
    require_planar(f1)?;
    require_planar(f2)?;
    if !s.is_finite() {
        return Err(Error::NonFiniteCoordinate);
    }
    let focal_dist = taxicab_distance(p2(f1), p2(f2));
    if s <= focal_dist {
        return Err(Error::SumTooSmall { sum: s, focal_dist });
    }
    let (ax, bx) = (f1[0].min(f2[0]), f1[0].max(f2[0]));
    let (ay, by) = (f1[1].min(f2[1]), f1[1].max(f2[1]));
    // Slack each flat side sits beyond the focal rectangle.
    let e = (s - focal_dist) / 2.0;
    let ring = [
        [bx + e, ay],
        [bx + e, by],
        [bx, by + e],
        [ax, by + e],
        [ax - e, by],
        [ax - e, ay],
        [ax, ay - e],
        [bx, ay - e],
    ];
    let mut vertices: Vec<P2> = Vec::with_capacity(8);
    for v in ring {
        if vertices.last() != Some(&v) {
            vertices.push(v);
        }
    }
    if vertices.len() > 1 && vertices.first() == vertices.last() {
        vertices.pop();
    }
    // Start from the lowest vertex, leftmost on ties; the ring is already
    // counterclockwise.
    let start = vertices
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| (a[1], a[0]).partial_cmp(&(b[1], b[0])).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    vertices.rotate_left(start);
    Ok(PolyShape::ClosedPolygon(
        vertices
            .into_iter()
            .map(|v| Point::xy(v[0], v[1]))
            .collect(),
    ))
}

/// Signature of the taxicab difference function on one partition cell:
/// `d(x, f1) - d(x, f2) = ax*x + ay*y + c` there.
struct CellForm {
    ax: f64,
    ay: f64,
    c: f64,
}

fn cell_form(sample: P2, f1: P2, f2: P2) -> CellForm {
    let s1 = if sample[0] >= f1[0] { 1.0 } else { -1.0 };
    let s2 = if sample[0] >= f2[0] { 1.0 } else { -1.0 };
    let t1 = if sample[1] >= f1[1] { 1.0 } else { -1.0 };
    let t2 = if sample[1] >= f2[1] { 1.0 } else { -1.0 };
    CellForm {
        ax: s1 - s2,
        ay: t1 - t2,
        c: -s1 * f1[0] + s2 * f2[0] - t1 * f1[1] + t2 * f2[1],
    }
}

/// Interior breaks strictly inside (lo, hi), sorted and deduplicated.
fn interior_breaks(lo: f64, hi: f64, candidates: [f64; 2]) -> Vec<f64> {
    let mut breaks: Vec<f64> = candidates
        .into_iter()
        .filter(|&b| b > lo && b < hi)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

/// The taxicab hyperbola `{x : |d(x, f1) - d(x, f2)| = k}` for
/// `0 < k < d(f1, f2)`: two unbounded polyline branches, clipped to `bbox`.
///
/// When `k` equals `||dx| - |dy||` of the focal displacement, whole
/// two-dimensional cells satisfy the equation; that locus is rejected as
/// `DegenerateLocus` rather than approximated.
pub fn taxicab_hyperbola(f1: &Point, f2: &Point, k: f64, bbox: &BoundingBox) -> Result<PolyShape> {
    require_planar(f1)?;
    require_planar(f2)?;
    if !k.is_finite() {
        return Err(Error::NonFiniteCoordinate);
    }
    let (p1, q2) = (p2(f1), p2(f2));
    let focal_dist = taxicab_distance(p1, q2);
    if k <= 0.0 || k >= focal_dist {
        return Err(Error::InvalidGap { gap: k, focal_dist });
    }

    // Degeneracy scan over the unclipped plane partition: a cell where the
    // difference is constant and equal to +-k is a 2-D piece of the locus.
    let x_edges = partition_edges(p1[0], q2[0]);
    let y_edges = partition_edges(p1[1], q2[1]);
    let level_tol = 1e-12 * (1.0 + k);
    for xb in x_edges.windows(2) {
        for yb in y_edges.windows(2) {
            let sample = [band_sample(xb[0], xb[1]), band_sample(yb[0], yb[1])];
            let form = cell_form(sample, p1, q2);
            if form.ax == 0.0
                && form.ay == 0.0
                && ((form.c - k).abs() <= level_tol || (form.c + k).abs() <= level_tol)
            {
                return Err(Error::DegenerateLocus {
                    x_min: xb[0],
                    x_max: xb[1],
                    y_min: yb[0],
                    y_max: yb[1],
                });
            }
        }
    }

    // Emit per-cell segments inside the clip box, one branch per level.
    let mut x_cells = vec![bbox.min_x];
    x_cells.extend(interior_breaks(bbox.min_x, bbox.max_x, [p1[0], q2[0]]));
    x_cells.push(bbox.max_x);
    let mut y_cells = vec![bbox.min_y];
    y_cells.extend(interior_breaks(bbox.min_y, bbox.max_y, [p1[1], q2[1]]));
    y_cells.push(bbox.max_y);

    let mut chains: Vec<Vec<P2>> = Vec::new();
    for level in [k, -k] {
        let mut segments: Vec<[P2; 2]> = Vec::new();
        for xb in x_cells.windows(2) {
            for yb in y_cells.windows(2) {
                let sample = [0.5 * (xb[0] + xb[1]), 0.5 * (yb[0] + yb[1])];
                let form = cell_form(sample, p1, q2);
                if let Some(seg) = clip_level_line(&form, level, xb[0], xb[1], yb[0], yb[1]) {
                    segments.push(seg);
                }
            }
        }
        chains.extend(chain_segments(segments));
    }
    chains.sort_by(|a, b| (a[0][0], a[0][1]).partial_cmp(&(b[0][0], b[0][1])).unwrap());
    Ok(PolyShape::OpenPolylineSet(
        chains
            .into_iter()
            .map(|chain| chain.into_iter().map(|p| Point::xy(p[0], p[1])).collect())
            .collect(),
    ))
}

/// Edges of the one-dimensional partition induced by two break candidates,
/// extended to the whole line.
fn partition_edges(b1: f64, b2: f64) -> Vec<f64> {
    let mut edges = vec![f64::NEG_INFINITY];
    let (lo, hi) = (b1.min(b2), b1.max(b2));
    edges.push(lo);
    if hi > lo {
        edges.push(hi);
    }
    edges.push(f64::INFINITY);
    edges
}

fn band_sample(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        (false, false) => 0.0,
    }
}

/// Clips `ax*x + ay*y + c = level` to the cell rectangle; `None` when the
/// level line misses the cell or only grazes a corner.
fn clip_level_line(
    form: &CellForm,
    level: f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
) -> Option<[P2; 2]> {
    const EDGE_EPS: f64 = 1e-12;
    let rhs = level - form.c;
    match (form.ax == 0.0, form.ay == 0.0) {
        (true, true) => None, // constant cells were vetted by the degeneracy scan
        (false, true) => {
            let x = rhs / form.ax;
            (x >= x0 - EDGE_EPS && x <= x1 + EDGE_EPS).then(|| {
                let x = x.clamp(x0, x1);
                [[x, y0], [x, y1]]
            })
        }
        (true, false) => {
            let y = rhs / form.ay;
            (y >= y0 - EDGE_EPS && y <= y1 + EDGE_EPS).then(|| {
                let y = y.clamp(y0, y1);
                [[x0, y], [x1, y]]
            })
        }
        (false, false) => {
            let mut hits: Vec<P2> = Vec::with_capacity(4);
            let mut push = |p: P2| {
                if hits.iter().all(|q| vecn::dist2(q, &p) > EDGE_EPS) {
                    hits.push(p);
                }
            };
            for x in [x0, x1] {
                let y = (rhs - form.ax * x) / form.ay;
                if y >= y0 - EDGE_EPS && y <= y1 + EDGE_EPS {
                    push([x, y.clamp(y0, y1)]);
                }
            }
            for y in [y0, y1] {
                let x = (rhs - form.ay * y) / form.ax;
                if x >= x0 - EDGE_EPS && x <= x1 + EDGE_EPS {
                    push([x.clamp(x0, x1), y]);
                }
            }
            if hits.len() < 2 {
                return None;
            }
            hits.sort_by(|a, b| (a[0], a[1]).partial_cmp(&(b[0], b[1])).unwrap());
            let (a, b) = (hits[0], hits[hits.len() - 1]);
            (vecn::dist2(&a, &b) > EDGE_EPS).then_some([a, b])
        }
    }
}

/// Joins cell segments into maximal polylines (endpoints matching within
/// 1e-9), drops collinear interior points, and orients each chain from its
/// lexicographically smaller end. Deterministic for identical input sets.
fn chain_segments(mut segments: Vec<[P2; 2]>) -> Vec<Vec<P2>> {
    const JOIN_TOL: f64 = 1e-9;
    // Canonical order makes the walk deterministic.
    for seg in &mut segments {
        if (seg[1][0], seg[1][1]) < (seg[0][0], seg[0][1]) {
            seg.swap(0, 1);
        }
    }
    segments.sort_by(|a, b| {
        (a[0][0], a[0][1], a[1][0], a[1][1])
            .partial_cmp(&(b[0][0], b[0][1], b[1][0], b[1][1]))
            .unwrap()
    });
    segments.dedup_by(|a, b| {
        vecn::dist2(&a[0], &b[0]) <= JOIN_TOL && vecn::dist2(&a[1], &b[1]) <= JOIN_TOL
    });

    let mut used = vec![false; segments.len()];
    let mut chains = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut chain: Vec<P2> = vec![segments[start][0], segments[start][1]];
        // Grow at both ends until no segment attaches.
        loop {
            let mut grew = false;
            for (i, seg) in segments.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let head = *chain.first().unwrap();
                let tail = *chain.last().unwrap();
                if vecn::dist2(&seg[0], &tail) <= JOIN_TOL {
                    chain.push(seg[1]);
                } else if vecn::dist2(&seg[1], &tail) <= JOIN_TOL {
                    chain.push(seg[0]);
                } else if vecn::dist2(&seg[0], &head) <= JOIN_TOL {
                    chain.insert(0, seg[1]);
                } else if vecn::dist2(&seg[1], &head) <= JOIN_TOL {
                    chain.insert(0, seg[0]);
                } else {
                    continue;
                }
                used[i] = true;
                grew = true;
            }
            if !grew {
                break;
            }
        }
        drop_collinear(&mut chain);
        if (chain.last().unwrap()[0], chain.last().unwrap()[1]) < (chain[0][0], chain[0][1]) {
            chain.reverse();
        }
        if chain.len() >= 2 {
            chains.push(chain);
        }
    }
    chains
}

fn drop_collinear(chain: &mut Vec<P2>) {
    let mut i = 1;
    while i + 1 < chain.len() {
        let u = [chain[i][0] - chain[i - 1][0], chain[i][1] - chain[i - 1][1]];
        let v = [chain[i + 1][0] - chain[i][0], chain[i + 1][1] - chain[i][1]];
        let cross = u[0] * v[1] - u[1] * v[0];
        let dot = u[0] * v[0] + u[1] * v[1];
        if cross.abs() <= 1e-12 * (vecn::norm2(&u) * vecn::norm2(&v)).max(1e-300) && dot > 0.0 {
            chain.remove(i);
        } else {
            i += 1;
        }
    }
}

/// Samples the unit circle of the metric as a closed polygon of `n >= 4`
/// points, counterclockwise.
///
/// Finite p uses the parametrization
/// `(sign(cos t)|cos t|^(2/p), sign(sin t)|sin t|^(2/p))`; the max metric
/// walks the square with corners `(+-1, +-1)` starting at `(1, 1)`. When 4
/// divides `n`, points are built one quadrant at a time and rotated by
/// exact quarter turns, so the sample set is bitwise invariant under the
/// octic group.
pub fn lp_circle_points(metric: &Metric, n: usize) -> Result<PolyShape> {
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    let vertices: Vec<P2> = if n.is_multiple_of(4) {
        let quarter = n / 4;
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let quadrant = j / quarter;
            let step = (j % quarter) as f64;
            let base = match metric.p() {
                Some(p) => {
                    let phi = step * std::f64::consts::FRAC_PI_2 / quarter as f64;
                    let (s, c) = phi.sin_cos();
                    [c.powf(2.0 / p), s.powf(2.0 / p)]
                }
                // Arc length along the square from the corner (1, 1).
                None => [1.0 - 2.0 * step / quarter as f64, 1.0],
            };
            out.push(quarter_turn(base, quadrant));
        }
        out
    } else {
        let step = std::f64::consts::TAU / n as f64;
        (0..n)
            .map(|j| {
                let t = step * j as f64;
                let (s, c) = t.sin_cos();
                match metric.p() {
                    Some(p) => [
                        c.signum() * c.abs().powf(2.0 / p),
                        s.signum() * s.abs().powf(2.0 / p),
                    ],
                    None => {
                        // Radial projection onto the square |x|,|y| <= 1.
                        let m = c.abs().max(s.abs());
                        [c / m, s / m]
                    }
                }
            })
            .collect()
    };
    Ok(PolyShape::ClosedPolygon(
        vertices
            .into_iter()
            .map(|v| Point::xy(v[0], v[1]))
            .collect(),
    ))
}

/// Exact counterclockwise quarter turns: (x, y) -> (-y, x).
fn quarter_turn(p: P2, quadrant: usize) -> P2 {
    match quadrant % 4 {
        0 => p,
        1 => [-p[1], p[0]],
        2 => [-p[0], -p[1]],
        _ => [p[1], -p[0]],
    }
}

/// CSV emission: one block per chain with an `x,y` header, blank line
/// between chains. Closed chains repeat their first vertex so plots close.
pub fn to_csv(shape: &PolyShape) -> String {
    let mut out = String::new();
    for (i, chain) in shape.chains().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str("x,y\n");
        for p in *chain {
            out.push_str(&format!("{},{}\n", p[0], p[1]));
        }
        if shape.is_closed() {
            if let Some(first) = chain.first() {
                out.push_str(&format!("{},{}\n", first[0], first[1]));
            }
        }
    }
    out
}

/// SVG 1.1 emission: one path per chain, viewBox = bounding box plus 5%
/// margin, y axis flipped to keep the figures upright. No scripting.
pub fn to_svg(shape: &PolyShape) -> String {
    let chains = shape.chains();
    let points: Vec<P2> = chains.iter().flat_map(|c| c.iter().map(p2)).collect();
    let (mut min_x, mut min_y) = (f64::MAX, f64::MAX);
    let (mut max_x, mut max_y) = (f64::MIN, f64::MIN);
    for p in &points {
        min_x = min_x.min(p[0]);
        max_x = max_x.max(p[0]);
        min_y = min_y.min(p[1]);
        max_y = max_y.max(p[1]);
    }
    if points.is_empty() {
        (min_x, min_y, max_x, max_y) = (0.0, 0.0, 1.0, 1.0);
    }
    let pad_x = 0.05 * (max_x - min_x).max(0.1);
    let pad_y = 0.05 * (max_y - min_y).max(0.1);
    let view = format!(
        "{} {} {} {}",
        min_x - pad_x,
        -max_y - pad_y,
        (max_x - min_x) + 2.0 * pad_x,
        (max_y - min_y) + 2.0 * pad_y
    );
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{view}\">\n"
    ));
    for chain in chains {
        let mut d = String::new();
        for (i, p) in chain.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{}{} {} ", cmd, p[0], -p[1]));
        }
        if shape.is_closed() {
            d.push('Z');
        }
        out.push_str(&format!(
            "  <path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.02\"/>\n",
            d.trim_end()
        ));
    }
    out.push_str("</svg>\n");
    out
}
