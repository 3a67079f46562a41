//! Ordered intersection-angle sets and their structure under twisting.
//!
//! The angle set of a pair of closed geodesics records, at every crossing,
//! the counter-clockwise angle from the base curve to the partner, listed in
//! the cyclic order the crossings occur along the base. Collar traces
//! restrict an angle set to the collar of a reference curve and tag each
//! entry with the side of the core it lies on and the transit arc of the
//! partner it belongs to; the monotonicity and accumulation checks act on
//! those traces.

use crate::curves::{geom_intersection, ClosedGeodesic};
use crate::error::{Error, Result};
use crate::hyp2::intersect;
use crate::surface::{collar_width, Collar, Surface};
use crate::walk;
use crate::words::CurveClass;
use serde::{Deserialize, Serialize};

/// One crossing record of an angle set.
#[derive(Clone, Debug)]
pub struct AngleEntry {
    /// Arclength position along the base curve, in `[0, length)`.
    pub s: f64,
    /// Angle in `(0, pi)`, counter-clockwise from base to partner.
    pub theta: f64,
    /// Index into the partner list.
    pub partner: usize,
    /// Crossing sign (+1 when (base, partner) tangents are positively
    /// oriented).
    pub sign: i8,
    /// Per-reference collar tags (same order as `AngleSet::ref_classes`).
    pub(crate) tags: Vec<walk::RefTag>,
}

/// Cyclically ordered intersection angles along a base geodesic.
#[derive(Clone, Debug)]
pub struct AngleSet {
    pub base_class: CurveClass,
    pub base_length: f64,
    pub partners: Vec<CurveClass>,
    /// Entries sorted by position along the base.
    pub entries: Vec<AngleEntry>,
    /// Reference curves for which collar tags were computed.
    pub ref_classes: Vec<CurveClass>,
    ref_widths: Vec<f64>,
}

impl AngleSet {
    /// Angle values in base order.
    pub fn thetas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.theta).collect()
    }

    /// Restriction to a single partner (preserving order).
    pub fn restrict_to_partner(&self, partner: usize) -> AngleSet {
        AngleSet {
            base_class: self.base_class.clone(),
            base_length: self.base_length,
            partners: self.partners.clone(),
            entries: self.entries.iter().filter(|e| e.partner == partner).cloned().collect(),
            ref_classes: self.ref_classes.clone(),
            ref_widths: self.ref_widths.clone(),
        }
    }

    /// Extract the ordered subsequence at the given entry indices.
    pub fn ordered_subset(&self, indices: &[usize]) -> Vec<f64> {
        indices.iter().map(|&i| self.entries[i].theta).collect()
    }

    /// Rotate the cyclic order so entry `k` becomes first.
    pub fn rotated(&self, k: usize) -> AngleSet {
        let mut out = self.clone();
        let n = out.entries.len();
        if n > 0 {
            out.entries.rotate_left(k % n);
        }
        out
    }
}

fn build_angle_set(
    surface: &Surface,
    base: &ClosedGeodesic,
    partners: &[ClosedGeodesic],
    refs: &[ClosedGeodesic],
) -> Result<AngleSet> {
    let ref_widths: Vec<f64> = refs.iter().map(|r| collar_width(r.length)).collect();
    let ref_pairs: Vec<(&ClosedGeodesic, f64)> =
        refs.iter().zip(ref_widths.iter().copied()).collect();
    let mut entries: Vec<AngleEntry> = Vec::new();
    for (pi, partner) in partners.iter().enumerate() {
        let recs = walk::crossings(surface, base, partner, &ref_pairs)?;
        for rec in recs {
            entries.push(AngleEntry {
                s: rec.s_base,
                theta: rec.angle,
                partner: pi,
                sign: rec.sign,
                tags: rec.ref_tags,
            });
        }
    }
    entries.sort_by(|a, b| a.s.partial_cmp(&b.s).unwrap().then(a.partner.cmp(&b.partner)));
    Ok(AngleSet {
        base_class: base.class.clone(),
        base_length: base.length,
        partners: partners.iter().map(|p| p.class.clone()).collect(),
        entries,
        ref_classes: refs.iter().map(|r| r.class.clone()).collect(),
        ref_widths,
    })
}

/// Angle set of a pair of distinct simple closed geodesics. Collar tags are
/// computed relative to all pants curves of the surface.
pub fn angle_set(surface: &Surface, base: &ClosedGeodesic, partner: &ClosedGeodesic) -> Result<AngleSet> {
    let refs: Vec<ClosedGeodesic> = surface.pants_curves().to_vec();
    build_angle_set(surface, base, std::slice::from_ref(partner), &refs)
}

/// Angle set against a union of pairwise disjoint partners, interleaved
/// along the base and labeled by partner.
pub fn angle_set_multi(
    surface: &Surface,
    base: &ClosedGeodesic,
    partners: &[ClosedGeodesic],
) -> Result<AngleSet> {
    for i in 0..partners.len() {
        for j in (i + 1)..partners.len() {
            let count = geom_intersection(surface, &partners[i], &partners[j])?;
            if count != 0 {
                return Err(Error::PartnersIntersect { i, j, count });
            }
        }
    }
    let refs: Vec<ClosedGeodesic> = surface.pants_curves().to_vec();
    build_angle_set(surface, base, partners, &refs)
}

/// As [`angle_set_multi`] but with explicit reference curves for collar tags
/// (no disjointness validation).
pub fn angle_set_with_refs(
    surface: &Surface,
    base: &ClosedGeodesic,
    partners: &[ClosedGeodesic],
    refs: &[ClosedGeodesic],
) -> Result<AngleSet> {
    build_angle_set(surface, base, partners, refs)
}

/// The set of angle values, deduplicated at tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiSet {
    pub values: Vec<f64>,
    pub dedup_tol: f64,
}

impl PhiSet {
    pub fn from_angles(mut angles: Vec<f64>, dedup_tol: f64) -> PhiSet {
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut values: Vec<f64> = Vec::new();
        for a in angles {
            if values.last().map_or(true, |&v| a - v > dedup_tol) {
                values.push(a);
            }
        }
        PhiSet { values, dedup_tol }
    }

    pub fn from_angle_set(aset: &AngleSet, dedup_tol: f64) -> PhiSet {
        PhiSet::from_angles(aset.thetas(), dedup_tol)
    }

    /// Minimum distance between values of the two sets.
    pub fn distance(&self, other: &PhiSet) -> f64 {
        let mut best = f64::INFINITY;
        for &a in &self.values {
            for &b in &other.values {
                best = best.min((a - b).abs());
            }
        }
        best
    }

    /// Minimum gap between distinct values within this set.
    pub fn min_gap(&self) -> f64 {
        let mut best = f64::INFINITY;
        for w in self.values.windows(2) {
            best = best.min(w[1] - w[0]);
        }
        best
    }
}

/// One entry of a collar trace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceEntry {
    pub s: f64,
    pub theta: f64,
    pub partner: usize,
    /// Side of the oriented core: sign of the Fermi coordinate `r`.
    pub side: i8,
    /// Signed distance from the core.
    pub r: f64,
    /// Transit arc of the partner this crossing belongs to.
    pub component: (i64, i64),
    /// Index of the base transit through the collar this entry sits in.
    pub transit: usize,
}

/// One transit of the base curve through the collar: it crosses the core
/// once, at position `s_phi` along the base, at angle `phi`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseTransit {
    pub s_phi: f64,
    pub phi: f64,
}

/// Restriction of an angle set to the collar of a reference curve.
#[derive(Clone, Debug)]
pub struct CollarTrace {
    pub core_class: CurveClass,
    pub width: f64,
    pub base_length: f64,
    pub entries: Vec<TraceEntry>,
    pub transits: Vec<BaseTransit>,
}

/// Restrict an angle set to a collar. The angle set must have been built
/// with the collar's core among its reference curves; entries are assigned
/// to the base transit (crossing of the base with the core) they belong to.
pub fn collar_trace(surface: &Surface, aset: &AngleSet, collar: &Collar) -> Result<CollarTrace> {
    let ref_idx = aset
        .ref_classes
        .iter()
        .position(|c| c.same_cyclic_word(&collar.core.class))
        .ok_or_else(|| Error::Invalid("angle set carries no tags for this collar".into()))?;

    let base_geo = ClosedGeodesic::from_class(surface, &aset.base_class, Some(true))?;
    let base_core = walk::crossings(surface, &base_geo, &collar.core, &[])?;
    let transits: Vec<BaseTransit> = base_core
        .iter()
        .map(|r| BaseTransit { s_phi: r.s_base, phi: r.angle })
        .collect();

    let len = aset.base_length;
    let cyc_dist = |a: f64, b: f64| -> f64 {
        let d = (a - b).rem_euclid(len);
        d.min(len - d)
    };
    let mut entries = Vec::new();
    for e in &aset.entries {
        let tag = &e.tags[ref_idx];
        if !tag.in_collar {
            continue;
        }
        let transit = if transits.is_empty() {
            0
        } else {
            transits
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    cyc_dist(e.s, a.s_phi).partial_cmp(&cyc_dist(e.s, b.s_phi)).unwrap()
                })
                .map(|(i, _)| i)
                .unwrap()
        };
        entries.push(TraceEntry {
            s: e.s,
            theta: e.theta,
            partner: e.partner,
            side: if tag.r >= 0.0 { 1 } else { -1 },
            r: tag.r,
            component: tag.component,
            transit,
        });
    }
    Ok(CollarTrace {
        core_class: collar.core.class.clone(),
        width: collar.width,
        base_length: aset.base_length,
        entries,
        transits,
    })
}

impl CollarTrace {
    /// Entry indices belonging to one base transit, in base order.
    pub fn transit_entries(&self, transit: usize) -> Vec<usize> {
        (0..self.entries.len()).filter(|&i| self.entries[i].transit == transit).collect()
    }

    /// Crossing counts on the two sides of the core.
    pub fn side_counts(&self) -> (usize, usize) {
        let plus = self.entries.iter().filter(|e| e.side > 0).count();
        (plus, self.entries.len() - plus)
    }
}

/// Outcome of a monotonicity check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub holds: bool,
    /// Step index of the first violation, if any.
    pub first_violation: Option<usize>,
    /// Smallest strict margin observed across all compared steps.
    pub min_margin: f64,
}

/// Check the per-side monotone pattern of a twisted family inside a collar
/// transit: along the base, angles run strictly toward the core angle `phi`
/// on the approach side and strictly away on the far side, staying above
/// `phi` for positive twists and below for negative ones. Strictness is
/// asserted up to `tol`: a step violating by more than `tol` fails (the
/// true gaps shrink geometrically with twist depth, eventually below any
/// fixed resolution).
pub fn monotonicity_check(
    trace: &CollarTrace,
    transit: usize,
    n_sign: i64,
    tol: f64,
) -> MonotonicityReport {
    let idx = trace.transit_entries(transit);
    let phi = trace.transits[transit].phi;
    let s_phi = trace.transits[transit].s_phi;
    let len = trace.base_length;
    // Signed offset from the core crossing, in (-len/2, len/2].
    let offset = |s: f64| -> f64 {
        let mut d = (s - s_phi).rem_euclid(len);
        if d > len / 2.0 {
            d -= len;
        }
        d
    };
    let mut all: Vec<&TraceEntry> = idx.iter().map(|&i| &trace.entries[i]).collect();
    all.sort_by(|a, b| offset(a.s).partial_cmp(&offset(b.s)).unwrap());
    let split = all.partition_point(|e| offset(e.s) < 0.0);
    let (before, after) = all.split_at(split);

    let mut min_margin = f64::INFINITY;
    let mut first_violation = None;
    let mut position = 0usize;
    let mut check_run = |run: &[&TraceEntry], decreasing: bool| {
        for w in run.windows(2) {
            let step = if decreasing { w[0].theta - w[1].theta } else { w[1].theta - w[0].theta };
            min_margin = min_margin.min(step);
            if step < -tol && first_violation.is_none() {
                first_violation = Some(position);
            }
            position += 1;
        }
        // Every entry must sit on the pattern's side of phi: above for
        // positive twists, below for negative ones.
        for e in run {
            let gap = if n_sign >= 0 { e.theta - phi } else { phi - e.theta };
            min_margin = min_margin.min(gap);
            if gap < -tol && first_violation.is_none() {
                first_violation = Some(position);
            }
        }
    };
    if n_sign >= 0 {
        check_run(before, true);
        check_run(after, false);
    } else {
        check_run(before, false);
        check_run(after, true);
    }
    MonotonicityReport { holds: first_violation.is_none(), first_violation, min_margin }
}

/// Number of angles within `eps` of `phi`.
pub fn accumulation_count(thetas: &[f64], phi: f64, eps: f64) -> usize {
    thetas.iter().filter(|&&t| (t - phi).abs() < eps).count()
}

/// Similarity report for two integer sequences sampled over a finite range.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimilarityReport {
    /// Bounded difference over the sampled horizon.
    pub similar: bool,
    /// Maximum absolute difference observed.
    pub k: i64,
    /// Length of the sampled range.
    pub horizon: usize,
    /// Raised when the difference keeps growing across the horizon
    /// (max over the second half at least twice the max over the first):
    /// divergence rather than a bounded deviation.
    pub growth_flagged: bool,
}

/// Compare two equally long integer sequences: maximum difference plus a
/// divergence flag for differences that grow along the range.
pub fn similar(u: &[i64], v: &[i64]) -> SimilarityReport {
    assert_eq!(u.len(), v.len(), "sequences must share their sampled horizon");
    let diffs: Vec<i64> = u.iter().zip(v).map(|(a, b)| (a - b).abs()).collect();
    let k = diffs.iter().copied().max().unwrap_or(0);
    let half = diffs.len() / 2;
    let first = diffs[..half].iter().copied().max().unwrap_or(0);
    let second = diffs[half..].iter().copied().max().unwrap_or(0);
    let growth_flagged = k >= 4 && second >= 2 * first.max(1);
    SimilarityReport { similar: !growth_flagged, k, horizon: u.len(), growth_flagged }
}

/// One angle cluster across a twist sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cluster {
    /// Window center.
    pub center: f64,
    /// Median position along the base curve (cyclic order key).
    pub position: f64,
    /// Window counts per sweep member.
    pub counts: Vec<usize>,
    /// Whether the counts grow along the sweep (an accumulating cluster).
    pub growing: bool,
}

/// Deterministic 1-D clustering of a twist sweep of angle sets: candidate
/// centers are gap-separated runs in the densest (last) member, counted in
/// fixed windows `(center - eps, center + eps)` across the whole sweep.
/// Clusters whose counts do not grow are reported with `growing = false`
/// (the bounded remainder). Overlapping windows of two growing clusters
/// raise `AmbiguousClustering`.
pub fn cluster_angles(sweep: &[AngleSet], eps: f64) -> Result<Vec<Cluster>> {
    let last = sweep.last().ok_or_else(|| Error::ClusterFailure("empty sweep".into()))?;
    if last.entries.is_empty() {
        return Err(Error::ClusterFailure("final angle set has no entries".into()));
    }
    let mut angles: Vec<(f64, f64)> = last.entries.iter().map(|e| (e.theta, e.s)).collect();
    angles.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut runs: Vec<Vec<(f64, f64)>> = vec![vec![angles[0]]];
    for &pair in &angles[1..] {
        let prev = runs.last().unwrap().last().unwrap().0;
        if pair.0 - prev > eps {
            runs.push(vec![pair]);
        } else {
            runs.last_mut().unwrap().push(pair);
        }
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    for run in runs {
        let mid = run[run.len() / 2].0;
        let counts: Vec<usize> =
            sweep.iter().map(|aset| accumulation_count(&aset.thetas(), mid, eps)).collect();
        let growing = counts.last().copied().unwrap_or(0) > counts.first().copied().unwrap_or(0)
            && counts.last().copied().unwrap_or(0) >= 3;
        let mut ss: Vec<f64> = run.iter().map(|&(_, s)| s).collect();
        ss.sort_by(|a, b| a.partial_cmp(b).unwrap());
        clusters.push(Cluster { center: mid, position: ss[ss.len() / 2], counts, growing });
    }
    let growing: Vec<&Cluster> = clusters.iter().filter(|c| c.growing).collect();
    for i in 0..growing.len() {
        for j in (i + 1)..growing.len() {
            let d = (growing[i].center - growing[j].center).abs();
            if d < 2.0 * eps {
                return Err(Error::AmbiguousClustering {
                    c1: growing[i].center,
                    c2: growing[j].center,
                    two_eps: 2.0 * eps,
                });
            }
        }
    }
    clusters.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap());
    Ok(clusters)
}

/// Cyclic distance between two angle sequences: minimum over rotations (and
/// the reversed orientation) of the maximum entrywise difference. Returns
/// +inf on length mismatch.
pub fn cyclic_angle_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    if a.is_empty() {
        return 0.0;
    }
    let n = a.len();
    let mut best = f64::INFINITY;
    let reversed: Vec<f64> = a.iter().rev().copied().collect();
    for cand in [a.to_vec(), reversed] {
        for k in 0..n {
            let mut worst: f64 = 0.0;
            for i in 0..n {
                worst = worst.max((cand[(i + k) % n] - b[i]).abs());
            }
            best = best.min(worst);
        }
    }
    best
}

/// Arc data of one partner transit through a collar.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CollarComponent {
    /// Transit identifier.
    pub component: (i64, i64),
    /// Geodesic length of the transit arc inside the collar.
    pub length_inside: f64,
    /// Crossing angle with the core.
    pub core_angle: f64,
    /// Arclength window the transit's feet span along the core.
    pub span: f64,
    /// Crossings with a radial arc at a generic offset.
    pub radial_crossings: i64,
}

/// Per-transit collar data for a partner curve: for every transit arc of
/// the partner through the collar, its interior length and footprint along
/// the core. Transit length comes from the crossing angle: a point at
/// arclength `t` from the crossing has distance `d` to the core with
/// `sinh d = sinh t * sin(angle)`.
pub fn collar_components(
    surface: &Surface,
    partner: &ClosedGeodesic,
    collar: &Collar,
) -> Result<Vec<CollarComponent>> {
    let recs = walk::crossings(surface, &collar.core, partner, &[])?;
    let mut out: Vec<CollarComponent> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let w = collar.width;
    for rec in &recs {
        let key = ((rec.unwrapped / 1e-5).round() as i64, (rec.s_base / 1e-5).round() as i64);
        if !seen.insert(key) {
            continue;
        }
        let theta = rec.angle;
        let t_half = (w.sinh() / theta.sin()).asinh();
        let length_inside = 2.0 * t_half;
        // Foot of the point at arclength t from the crossing sits at core
        // arclength u with tanh u = tanh t * cos(angle).
        let u_half = (t_half.tanh() * theta.cos()).abs().atanh();
        let span = 2.0 * u_half;
        let core_len = collar.core.length;
        let generic_offset = 0.237 * core_len;
        let lo = rec.s_base - u_half + generic_offset;
        let hi = rec.s_base + u_half + generic_offset;
        let radial_crossings = (hi / core_len).floor() as i64 - (lo / core_len).floor() as i64;
        out.push(CollarComponent {
            component: key,
            length_inside,
            core_angle: theta,
            span,
            radial_crossings,
        });
    }
    Ok(out)
}

/// Count the crossings of an angle set lying outside every reference collar.
pub fn count_outside_collars(aset: &AngleSet) -> usize {
    aset.entries.iter().filter(|e| e.tags.iter().all(|t| !t.in_collar)).count()
}

/// Write an angle set as CSV with columns
/// `index,s_position,theta_radians,partner,side,component`.
/// Side and component refer to the first reference collar containing the
/// crossing; entries outside every collar leave them empty. Rows follow the
/// cyclic order along the base from its marked origin; cyclic alignment
/// across surfaces is the consumer's responsibility.
pub fn write_angle_set_csv<W: std::io::Write>(aset: &AngleSet, mut w: W) -> std::io::Result<()> {
    writeln!(w, "index,s_position,theta_radians,partner,side,component")?;
    for (i, e) in aset.entries.iter().enumerate() {
        let collar_tag = e.tags.iter().enumerate().find(|(_, t)| t.in_collar);
        match collar_tag {
            Some((k, t)) => writeln!(
                w,
                "{i},{:.12e},{:.12e},{},{},{}:{}:{}",
                e.s,
                e.theta,
                e.partner,
                if t.r >= 0.0 { 1 } else { -1 },
                k,
                t.component.0,
                t.component.1
            )?,
            None => writeln!(w, "{i},{:.12e},{:.12e},{},,", e.s, e.theta, e.partner)?,
        }
    }
    Ok(())
}

/// Crossing data of a single explicit translate: position along the base
/// and angle, computed directly on half-plane axes (independent oracle
/// route for the walk engine).
pub fn direct_crossing_angle(
    base: &ClosedGeodesic,
    partner: &ClosedGeodesic,
    translate: &crate::hyp2::MoebiusMap,
) -> Option<(f64, f64)> {
    let line = translate.apply_geodesic(&partner.axis);
    let x = intersect(&base.axis, &line)?;
    let angle = crate::hyp2::angle_at(&base.axis, &line, &x).ok()?;
    Some((base.position_of(&x), angle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{dehn_twist, geodesic_rep, TwistSpec};
    use crate::surface::{FenchelNielsen, PantsGraph};

    fn reference_surface() -> Surface {
        let graph = PantsGraph::theta(2).unwrap();
        let fn_data =
            FenchelNielsen::new(graph, vec![2.0, 2.5, 3.0], vec![0.1, 0.2, 0.3]).unwrap();
        Surface::build(&fn_data).unwrap()
    }

    fn transversal_pair(s: &Surface) -> (ClosedGeodesic, ClosedGeodesic) {
        for t in s.stable_classes() {
            let geo = geodesic_rep(s, t).unwrap();
            for i in 0..3 {
                let cuff = s.pants_curve(i);
                if geom_intersection(s, cuff, &geo).unwrap() == 1 {
                    return (cuff.clone(), geo);
                }
            }
        }
        panic!("no transversal pair");
    }

    #[test]
    fn disjoint_cuffs_have_empty_angle_set() {
        let s = reference_surface();
        let aset = angle_set(&s, s.pants_curve(0), s.pants_curve(1)).unwrap();
        assert!(aset.entries.is_empty());
    }

    #[test]
    fn angle_sets_complementary_and_counted() {
        let s = reference_surface();
        let (alpha, gamma) = transversal_pair(&s);
        let ab = angle_set(&s, &alpha, &gamma).unwrap();
        let ba = angle_set(&s, &gamma, &alpha).unwrap();
        assert_eq!(ab.entries.len(), 1);
        assert_eq!(ba.entries.len(), 1);
        let sum = ab.entries[0].theta + ba.entries[0].theta;
        assert!((sum - std::f64::consts::PI).abs() < 1e-9, "sum = {sum}");
        for e in ab.entries.iter().chain(ba.entries.iter()) {
            assert!(e.theta > 1e-9 && e.theta < std::f64::consts::PI - 1e-9);
        }
    }

    #[test]
    fn multi_set_restriction_matches_individual() {
        let s = reference_surface();
        let (_, gamma) = transversal_pair(&s);
        let partners: Vec<ClosedGeodesic> = s.pants_curves().to_vec();
        let multi = angle_set_multi(&s, &gamma, &partners).unwrap();
        let total: usize =
            (0..partners.len()).map(|i| multi.restrict_to_partner(i).entries.len()).sum();
        assert_eq!(total, multi.entries.len());
        for (i, p) in partners.iter().enumerate() {
            let single = angle_set(&s, &gamma, p).unwrap();
            let restricted = multi.restrict_to_partner(i);
            assert_eq!(single.entries.len(), restricted.entries.len());
            for (a, b) in single.entries.iter().zip(restricted.entries.iter()) {
                assert!((a.s - b.s).abs() < 1e-9 && (a.theta - b.theta).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn entry_counts_match_intersection_numbers() {
        let s = reference_surface();
        let (_, gamma) = transversal_pair(&s);
        for p in s.pants_curves() {
            let aset = angle_set(&s, &gamma, p).unwrap();
            let iota = geom_intersection(&s, &gamma, p).unwrap();
            assert_eq!(aset.entries.len(), iota);
        }
    }

    #[test]
    fn cyclic_equivalence_under_rotation() {
        let s = reference_surface();
        let (_, gamma) = transversal_pair(&s);
        let partners: Vec<ClosedGeodesic> = s.pants_curves().to_vec();
        let multi = angle_set_multi(&s, &gamma, &partners).unwrap();
        assert!(multi.entries.len() >= 2);
        let thetas = multi.thetas();
        let rotated = multi.rotated(1);
        assert!(cyclic_angle_distance(&thetas, &rotated.thetas()) < 1e-12);
    }

    #[test]
    fn twisted_family_monotone_pattern() {
        let s = reference_surface();
        let (alpha, gamma) = transversal_pair(&s);
        let collar = s.collar(&alpha).unwrap();
        for n in [6i64, -6] {
            let spec = TwistSpec::single(&s, alpha.clone(), n).unwrap();
            let twisted = dehn_twist(&s, &gamma.class, &spec).unwrap();
            let tgeo = ClosedGeodesic::from_class(&s, &twisted, Some(true)).unwrap();
            let aset = angle_set(&s, &gamma, &tgeo).unwrap();
            assert_eq!(aset.entries.len(), n.unsigned_abs() as usize);
            let trace = collar_trace(&s, &aset, &collar).unwrap();
            assert_eq!(trace.transits.len(), 1);
            let report = monotonicity_check(&trace, 0, n.signum(), 1e-9);
            assert!(
                report.holds,
                "n = {n}: violation at {:?}, margin {}",
                report.first_violation, report.min_margin
            );
        }
    }

    #[test]
    fn shuffled_trace_fails_monotonicity() {
        let s = reference_surface();
        let (alpha, gamma) = transversal_pair(&s);
        let collar = s.collar(&alpha).unwrap();
        let spec = TwistSpec::single(&s, alpha.clone(), 8).unwrap();
        let twisted = dehn_twist(&s, &gamma.class, &spec).unwrap();
        let tgeo = ClosedGeodesic::from_class(&s, &twisted, Some(true)).unwrap();
        let aset = angle_set(&s, &gamma, &tgeo).unwrap();
        let mut trace = collar_trace(&s, &aset, &collar).unwrap();
        // Swap the two extreme angles on one side: strictness must break.
        let idx = trace.transit_entries(0);
        assert!(idx.len() >= 4);
        let (i, j) = (idx[0], idx[1]);
        let tmp = trace.entries[i].theta;
        trace.entries[i].theta = trace.entries[j].theta;
        trace.entries[j].theta = tmp;
        let report = monotonicity_check(&trace, 0, 1, 1e-9);
        assert!(!report.holds);
        assert!(report.first_violation.is_some());
    }

    #[test]
    fn single_entry_transit_vacuously_monotone() {
        let s = reference_surface();
        let (alpha, gamma) = transversal_pair(&s);
        let collar = s.collar(&alpha).unwrap();
        let spec = TwistSpec::single(&s, alpha.clone(), 1).unwrap();
        let twisted = dehn_twist(&s, &gamma.class, &spec).unwrap();
        let tgeo = ClosedGeodesic::from_class(&s, &twisted, Some(true)).unwrap();
        let aset = angle_set(&s, &gamma, &tgeo).unwrap();
        let trace = collar_trace(&s, &aset, &collar).unwrap();
        let report = monotonicity_check(&trace, 0, 1, 1e-9);
        assert!(report.holds);
    }

    #[test]
    fn accumulation_counts_grow_linearly() {
        let s = reference_surface();
        let (alpha, gamma) = transversal_pair(&s);
        let phi = angle_set(&s, &gamma, &alpha).unwrap().entries[0].theta;
        for n in [4i64, 8, 16] {
            let spec = TwistSpec::single(&s, alpha.clone(), n).unwrap();
            let twisted = dehn_twist(&s, &gamma.class, &spec).unwrap();
            let tgeo = ClosedGeodesic::from_class(&s, &twisted, Some(true)).unwrap();
            let aset = angle_set(&s, &gamma, &tgeo).unwrap();
            let m = aset.entries.len();
            assert_eq!(m as i64, n);
            let count = accumulation_count(&aset.thetas(), phi, 0.2);
            assert!(m - count <= 3, "n = {n}: deficit {}", m - count);
        }
    }

    #[test]
    fn similarity_reports() {
        let u: Vec<i64> = (1..=32).collect();
        let r = similar(&u, &u);
        assert!(r.similar && r.k == 0);
        let v: Vec<i64> = u.iter().map(|x| x + 3).collect();
        let r = similar(&u, &v);
        assert!(r.similar && r.k == 3);
        let w: Vec<i64> = u.iter().map(|x| 2 * x).collect();
        let r = similar(&u, &w);
        assert!(r.growth_flagged, "linear divergence must be flagged");
    }

    #[test]
    fn accumulation_count_window_extremes() {
        let thetas = [0.5, 1.0, 1.5, 2.0];
        assert_eq!(accumulation_count(&thetas, 1.0, 4.0), 4);
        assert_eq!(accumulation_count(&thetas, 0.77, 1e-6), 0);
    }

    #[test]
    fn cluster_detection_on_twist_sweep() {
        let s = reference_surface();
        let (alpha, gamma) = transversal_pair(&s);
        let phi = angle_set(&s, &gamma, &alpha).unwrap().entries[0].theta;
        let mut sweep = Vec::new();
        for n in [2i64, 4, 8, 12] {
            let spec = TwistSpec::single(&s, alpha.clone(), n).unwrap();
            let twisted = dehn_twist(&s, &gamma.class, &spec).unwrap();
            let tgeo = ClosedGeodesic::from_class(&s, &twisted, Some(true)).unwrap();
            sweep.push(angle_set(&s, &gamma, &tgeo).unwrap());
        }
        let clusters = cluster_angles(&sweep, 0.1).unwrap();
        let growing: Vec<&Cluster> = clusters.iter().filter(|c| c.growing).collect();
        assert_eq!(growing.len(), 1, "single-twist family has one accumulating cluster");
        assert!(
            (growing[0].center - phi).abs() < 0.1,
            "center {} vs phi {phi}",
            growing[0].center
        );
    }

    #[test]
    fn side_counts_nearly_balance() {
        let s = reference_surface();
        let (alpha, gamma) = transversal_pair(&s);
        let collar = s.collar(&alpha).unwrap();
        for n in [8i64, 13] {
            let spec = TwistSpec::single(&s, alpha.clone(), n).unwrap();
            let twisted = dehn_twist(&s, &gamma.class, &spec).unwrap();
            let tgeo = ClosedGeodesic::from_class(&s, &twisted, Some(true)).unwrap();
            let aset = angle_set(&s, &gamma, &tgeo).unwrap();
            let trace = collar_trace(&s, &aset, &collar).unwrap();
            let (p, m) = trace.side_counts();
            assert!((p as i64 - m as i64).abs() <= 2, "n = {n}: sides {p} vs {m}");
        }
    }

    #[test]
    fn fermi_sign_consistency_on_trace() {
        let s = reference_surface();
        let (alpha, gamma) = transversal_pair(&s);
        let collar = s.collar(&alpha).unwrap();
        let spec = TwistSpec::single(&s, alpha.clone(), 5).unwrap();
        let twisted = dehn_twist(&s, &gamma.class, &spec).unwrap();
        let tgeo = ClosedGeodesic::from_class(&s, &twisted, Some(true)).unwrap();
        let aset = angle_set(&s, &gamma, &tgeo).unwrap();
        let trace = collar_trace(&s, &aset, &collar).unwrap();
        assert!(!trace.entries.is_empty());
        for e in &trace.entries {
            assert_eq!(e.side, if e.r >= 0.0 { 1 } else { -1 });
            assert!(e.r.abs() <= collar.width + 1e-9);
        }
    }

    #[test]
    fn collar_component_length_bound() {
        let s = reference_surface();
        let (alpha, gamma) = transversal_pair(&s);
        let collar = s.collar(&alpha).unwrap();
        for n in [4i64, 9] {
            let spec = TwistSpec::single(&s, alpha.clone(), n).unwrap();
            let twisted = dehn_twist(&s, &gamma.class, &spec).unwrap();
            let tgeo = ClosedGeodesic::from_class(&s, &twisted, Some(true)).unwrap();
            let comps = collar_components(&s, &tgeo, &collar).unwrap();
            assert!(!comps.is_empty());
            for c in &comps {
                let bound = (c.radial_crossings as f64 - 2.0) * collar.core.length;
                assert!(
                    c.length_inside >= bound - 1e-9,
                    "length {} < bound {bound}",
                    c.length_inside
                );
            }
        }
    }
}
