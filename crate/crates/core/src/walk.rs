//! Crossing search along a geodesic's word.
//!
//! To find the crossings of two closed geodesics on the surface we walk the
//! cyclic word of one of them ("the partner"): conjugating its holonomy by
//! successive prefixes keeps a moving frame near every stretch of its axis,
//! and in each frame the other curve ("the base") only contributes translate
//! lines from a fixed small orbit ball. Letters displacing the basepoint
//! farther than a step budget are subdivided through fractional powers, so
//! consecutive frames always overlap. Every computation happens on
//! O(1)-sized geometry in the local frame, which keeps the search
//! numerically sound for twisted geodesics whose global matrices have
//! enormous entries.
//!
//! Positions along both curves are recovered through each frame's running
//! marked point, making deduplication across frames exact: a surface
//! crossing is identified by its (position-on-base, position-on-partner)
//! pair.
//!
//! The base curve must be coverable by the local ball (short geodesic
//! length); when it is not, the walk transposes the roles internally and
//! flips the records.

use crate::curves::ClosedGeodesic;
use crate::error::{Error, Result};
use crate::hyp2::{angle_at, intersect, Boundary, GeodesicH2, MoebiusMap, PointH2};
use crate::surface::Surface;
use crate::words::Word;
use rayon::prelude::*;
use std::collections::HashMap;

/// Spacing budget between consecutive walk frames.
const FRAME_STEP: f64 = 2.0;

/// Context tag of one crossing relative to a reference simple geodesic
/// (usually a pants curve with its collar).
#[derive(Clone, Debug)]
pub struct RefTag {
    /// Signed distance to the nearest lift of the reference curve;
    /// positive on the right of the oriented core.
    pub r: f64,
    /// Arclength position of the foot on the reference curve, in `[0, length)`.
    pub theta: f64,
    /// Whether the crossing lies inside the collar of the reference.
    pub in_collar: bool,
    /// Identifier of the partner's transit arc through this collar; stable
    /// across all crossings belonging to the same arc.
    pub component: (i64, i64),
}

/// One transversal crossing between the base and partner geodesics.
#[derive(Clone, Debug)]
pub struct Crossing {
    /// Position along the base curve in `[0, base.length)`.
    pub s_base: f64,
    /// Position along the partner curve in `[0, partner.length)`.
    pub s_partner: f64,
    /// Unwrapped position along the partner (monotone along its word path);
    /// orders twist insertions.
    pub unwrapped: f64,
    /// Counter-clockwise angle from base to partner in `(0, pi)`.
    pub angle: f64,
    /// Crossing sign: +1 if the oriented tangents (base, partner) form a
    /// positively oriented frame.
    pub sign: i8,
    /// Word index (into the partner's word) of the discovery frame; twist
    /// insertions for this crossing go at this index.
    pub frame: usize,
    /// Ball word `u` with `P_frame * u * A_base` the global base lift.
    pub conj: Word,
    /// Tags relative to the requested reference curves.
    pub ref_tags: Vec<RefTag>,
    /// Crossing point in the discovery frame.
    pub(crate) point: PointH2,
    /// Partner strand (the walked axis) in the discovery frame.
    pub(crate) partner_line: GeodesicH2,
    /// Unwrap offset of the discovery frame.
    pub(crate) offset: f64,
    /// Sub-letter frame transform, when the discovery frame was not a
    /// whole-letter frame: maps near-basepoint geometry into the frame.
    pub(crate) shift: Option<MoebiusMap>,
    /// Set when the walk transposed the roles: insertion data (`frame`,
    /// `conj`) then refers to the transposed walk and must not be used.
    pub transposed: bool,
}

/// Deduplicating set over quantized pairs.
struct PairDedup {
    map: HashMap<(i64, i64), ()>,
    quantum: f64,
}

impl PairDedup {
    fn new() -> Self {
        PairDedup { map: HashMap::new(), quantum: 1e-5 }
    }

    fn insert(&mut self, a: f64, b: f64) -> bool {
        let ka = (a / self.quantum).round() as i64;
        let kb = (b / self.quantum).round() as i64;
        for da in -1..=1 {
            for db in -1..=1 {
                if self.map.contains_key(&(ka + da, kb + db)) {
                    return false;
                }
            }
        }
        self.map.insert((ka, kb), ());
        true
    }
}

fn wrap(x: f64, period: f64) -> f64 {
    let mut y = x % period;
    if y < 0.0 {
        y += period;
    }
    y
}

/// Cheap interleaving test: two distinct geodesics cross iff their endpoint
/// pairs separate each other on the boundary circle. Boundary points map to
/// a monotone circle parameter with infinity at the top.
fn endpoints_interleave(g1: &GeodesicH2, g2: &GeodesicH2) -> bool {
    let val = |b: Boundary| -> f64 {
        match b {
            Boundary::Finite(x) => x.atan(),
            Boundary::Infinity => std::f64::consts::FRAC_PI_2 + 1.0,
        }
    };
    let (a1, a2) = g1.endpoints();
    let (b1, b2) = g2.endpoints();
    let (mut p, mut q) = (val(a1), val(a2));
    if p > q {
        std::mem::swap(&mut p, &mut q);
    }
    let inside1 = p < val(b1) && val(b1) < q;
    let inside2 = p < val(b2) && val(b2) < q;
    inside1 != inside2
}

/// One frame of the walk: the partner's holonomy conjugated to keep a piece
/// of its axis near the basepoint, plus the transform pulling precomputed
/// base lifts into this frame (identity for whole-letter frames).
struct Frame {
    mat: MoebiusMap,
    marked: PointH2,
    /// Word index for twist insertions at this frame.
    windex: usize,
    /// `to_frame` maps near-basepoint geometry into this frame
    /// (the inverse fractional letter power), if any.
    to_frame: Option<MoebiusMap>,
}

fn letter_matrix(surface: &Surface, letter: i32) -> MoebiusMap {
    let idx = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        *surface.generator(idx)
    } else {
        surface.generator(idx).inverse()
    }
}

/// Fractional power of a hyperbolic isometry: translation by `f` times its
/// length along its axis.
fn fractional_power(m: &MoebiusMap, f: f64) -> Option<MoebiusMap> {
    let len = m.translation_length().ok()?;
    let axis = m.axis().ok()?;
    let align = axis.align_to_imaginary_axis();
    Some(align.inverse().compose(&MoebiusMap::axis_translation(f * len)).compose(&align))
}

fn build_frames(surface: &Surface, curve: &ClosedGeodesic) -> Result<Vec<Frame>> {
    let o = surface.basepoint();
    let letters = curve.class.word().letters();
    let mut frames = Vec::with_capacity(letters.len() * 2);
    let mut mat = curve.mat;
    let mut marked = curve.axis.point_at_param(curve.marked);
    for (j, &l) in letters.iter().enumerate() {
        frames.push(Frame { mat, marked, windex: j, to_frame: None });
        let z = letter_matrix(surface, l);
        // Subdivide large steps so consecutive frames overlap.
        let disp = o.dist(&z.apply(&o));
        let pieces = (disp / FRAME_STEP).ceil().max(1.0) as usize;
        if pieces > 1 {
            for k in 1..pieces {
                let f = k as f64 / pieces as f64;
                if let Some(zf) = fractional_power(&z, f) {
                    let zf_inv = zf.inverse();
                    frames.push(Frame {
                        mat: zf_inv.compose(&mat).compose(&zf),
                        marked: zf_inv.apply(&marked),
                        windex: j,
                        to_frame: Some(zf_inv),
                    });
                }
            }
        }
        let zi = z.inverse();
        mat = zi.compose(&mat).compose(&z);
        marked = zi.apply(&marked);
        if !marked.y.is_finite() || marked.y <= 0.0 {
            return Err(Error::NumericOverflow(
                "marked point under/overflow while walking a word".into(),
            ));
        }
    }
    Ok(frames)
}

/// Base lift candidates: translate lines of the base axis by ball elements
/// capable of reaching the frame window.
struct BaseLifts<'a> {
    lines: Vec<(usize, GeodesicH2)>,
    ball: &'a crate::deck::Ball,
}

fn base_lifts<'a>(
    surface: &Surface,
    ball: &'a crate::deck::Ball,
    base: &ClosedGeodesic,
    window: f64,
) -> BaseLifts<'a> {
    let o = surface.basepoint();
    let delta_base = base.axis.dist_to_point(&o);
    let max_disp = (window + delta_base + 1.0).min(ball.radius);
    let n_cand = ball.elements.partition_point(|e| e.disp <= max_disp);
    let lines = ball.elements[..n_cand]
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.mat.try_apply_geodesic(&base.axis).map(|g| (i, g)))
        .collect();
    BaseLifts { lines, ball }
}

/// Whether the whole base period is visible from the basepoint within the
/// frame window (the requirement for ball coverage of the base role).
fn base_coverable(surface: &Surface, base: &ClosedGeodesic, window: f64) -> bool {
    let delta = base.axis.dist_to_point(&surface.basepoint());
    base.length / 2.0 + delta + 0.5 <= window
}

/// All crossings between `base` and `partner`, walking the partner's word.
/// `refs` requests collar tags relative to the given (curve, width) pairs.
/// Returns crossings sorted by `(s_base, s_partner)`.
pub fn crossings(
    surface: &Surface,
    base: &ClosedGeodesic,
    partner: &ClosedGeodesic,
    refs: &[(&ClosedGeodesic, f64)],
) -> Result<Vec<Crossing>> {
    if base.class.same_cyclic_word(&partner.class)
        || base.class.same_cyclic_word(&partner.class.inverse())
    {
        return Ok(Vec::new());
    }
    let window = surface.search.frame_window;
    if !base_coverable(surface, base, window) {
        if base_coverable(surface, partner, window) {
            // Walk the base's word instead and flip the records.
            let swapped = crossings_impl(surface, partner, base, refs, true)?;
            let mut out: Vec<Crossing> = swapped
                .into_iter()
                .map(|mut c| {
                    std::mem::swap(&mut c.s_base, &mut c.s_partner);
                    c.angle = std::f64::consts::PI - c.angle;
                    c.sign = -c.sign;
                    c.unwrapped = c.s_partner;
                    c.transposed = true;
                    c
                })
                .collect();
            out.sort_by(|a, b| {
                a.s_base
                    .partial_cmp(&b.s_base)
                    .unwrap()
                    .then(a.s_partner.partial_cmp(&b.s_partner).unwrap())
            });
            return Ok(out);
        }
        return Err(Error::Invalid(format!(
            "neither curve fits the frame window {window}; lengths {} and {}",
            base.length, partner.length
        )));
    }
    crossings_impl(surface, base, partner, refs, false)
}

fn crossings_impl(
    surface: &Surface,
    base: &ClosedGeodesic,
    partner: &ClosedGeodesic,
    refs: &[(&ClosedGeodesic, f64)],
    ref_tags_on_partner: bool,
) -> Result<Vec<Crossing>> {
    let params = surface.search;
    let window = params.frame_window;
    let ball = surface.ball(params.local_ball_radius);
    let o = surface.basepoint();

    let lifts = base_lifts(surface, &ball, base, window);
    let frames = build_frames(surface, partner)?;

    let raw: Vec<Vec<Crossing>> = frames
        .par_iter()
        .map(|fr| {
            let mut out = Vec::new();
            let Ok(axis_j) = fr.mat.axis() else { return out };
            let offset_j = axis_j.param_of(&fr.marked);
            for (ci, line0) in &lifts.lines {
                let line_b = match &fr.to_frame {
                    None => *line0,
                    Some(t) => match t.try_apply_geodesic(line0) {
                        Some(g) => g,
                        None => continue,
                    },
                };
                if line_b.same_support(&axis_j, 1e-9) {
                    continue;
                }
                if !endpoints_interleave(&axis_j, &line_b) {
                    continue;
                }
                let Some(x) = intersect(&axis_j, &line_b) else { continue };
                if o.dist(&x) > window {
                    continue;
                }
                let Ok(angle) = angle_at(&line_b, &axis_j, &x) else { continue };
                let e = &lifts.ball.elements[*ci];
                // Pull the crossing back to the base axis: undo the frame
                // shift, then the translate.
                let x_letter = match &fr.to_frame {
                    None => x,
                    Some(t) => t.inverse().apply(&x),
                };
                let base_pt = e.mat.inverse().apply(&x_letter);
                let s_base = base.position_of(&base_pt);
                let unwrapped = axis_j.param_of(&x) - offset_j;
                let s_partner = wrap(unwrapped, partner.length);
                let (t1x, t1y) = line_b.tangent_at(&x);
                let (t2x, t2y) = axis_j.tangent_at(&x);
                let sign = if t1x * t2y - t1y * t2x > 0.0 { 1 } else { -1 };
                out.push(Crossing {
                    s_base,
                    s_partner,
                    unwrapped,
                    angle,
                    sign,
                    frame: fr.windex,
                    conj: e.word.clone(),
                    ref_tags: Vec::new(),
                    point: x,
                    partner_line: axis_j,
                    offset: offset_j,
                    shift: fr.to_frame,
                    transposed: false,
                });
            }
            out
        })
        .collect();

    // Deduplicate by (s_base, s_partner) in deterministic frame order.
    let mut dedup = PairDedup::new();
    let mut result: Vec<Crossing> = Vec::new();
    for frame_out in raw {
        for c in frame_out {
            if dedup.insert(c.s_base, c.s_partner) {
                result.push(c);
            }
        }
    }

    // Reference tags for the survivors, computed in their discovery frames.
    if !refs.is_empty() {
        for (rc, width) in refs.iter() {
            let delta_ref = rc.axis.dist_to_point(&o);
            let max_disp = (window + delta_ref + width + 1.5).min(params.local_ball_radius);
            let n_ref = ball.elements.partition_point(|e| e.disp <= max_disp);
            let ref_cands = &ball.elements[..n_ref];
            for c in &mut result {
                let mut best_abs = f64::INFINITY;
                let mut tag = RefTag { r: 0.0, theta: 0.0, in_collar: false, component: (0, 0) };
                // The stored geometry lives in the discovery frame; shift
                // the near-basepoint ref lifts the same way before testing.
                let unshift = c.shift.map(|t| t.inverse());
                for re in ref_cands {
                    let Some(line_r0) = re.mat.try_apply_geodesic(&rc.axis) else { continue };
                    let line_r = match &c.shift {
                        None => line_r0,
                        Some(t) => match t.try_apply_geodesic(&line_r0) {
                            Some(g) => g,
                            None => continue,
                        },
                    };
                    let back = |p: &PointH2| -> PointH2 {
                        let q = match &unshift {
                            None => *p,
                            Some(t) => t.apply(p),
                        };
                        re.mat.inverse().apply(&q)
                    };
                    let r = line_r.signed_dist(&c.point);
                    if r.abs() < best_abs {
                        best_abs = r.abs();
                        let foot = line_r.foot_of_perpendicular(&c.point);
                        let theta = rc.position_of(&back(&foot));
                        let component = match intersect(&c.partner_line, &line_r) {
                            Some(xc) => {
                                let u_core = c.partner_line.param_of(&xc) - c.offset;
                                let t_core = rc.position_of(&back(&xc));
                                ((u_core / 1e-5).round() as i64, (t_core / 1e-5).round() as i64)
                            }
                            None => {
                                let u_foot = c.partner_line.param_of(&c.point) - c.offset;
                                ((u_foot / 1e-5).round() as i64, i64::MIN)
                            }
                        };
                        tag = RefTag { r, theta, in_collar: r.abs() <= *width, component };
                    }
                }
                c.ref_tags.push(tag);
            }
        }
        let _ = ref_tags_on_partner;
    }

    result.sort_by(|a, b| {
        a.s_base
            .partial_cmp(&b.s_base)
            .unwrap()
            .then(a.s_partner.partial_cmp(&b.s_partner).unwrap())
    });
    Ok(result)
}

/// Self-crossing detection: walks the curve's own word and tests translate
/// lines from the local ball against each frame's strand. Returns distinct
/// transversal self-crossings as unordered position pairs along the curve.
pub fn self_crossings(surface: &Surface, curve: &ClosedGeodesic) -> Result<Vec<(f64, f64)>> {
    let params = surface.search;
    let window = params.frame_window;
    let ball = surface.ball(params.local_ball_radius);
    let o = surface.basepoint();
    let frames = build_frames(surface, curve)?;

    let raw: Vec<Vec<(f64, f64)>> = frames
        .par_iter()
        .map(|fr| {
            let mut out = Vec::new();
            let Ok(axis_j) = fr.mat.axis() else { return out };
            let offset_j = axis_j.param_of(&fr.marked);
            for e in ball.elements.iter().skip(1) {
                // Translates near the frame: shift ball elements into
                // sub-letter frames when needed.
                let m = match &fr.to_frame {
                    None => e.mat,
                    Some(t) => t.compose(&e.mat).compose(&t.inverse()),
                };
                let Some(line2) = m.try_apply_geodesic(&axis_j) else { continue };
                if line2.same_support(&axis_j, 1e-9) {
                    continue;
                }
                if !endpoints_interleave(&axis_j, &line2) {
                    continue;
                }
                let Some(x) = intersect(&axis_j, &line2) else { continue };
                if o.dist(&x) > window {
                    continue;
                }
                let s1 = wrap(axis_j.param_of(&x) - offset_j, curve.length);
                let back = m.inverse().apply(&x);
                let s2 = wrap(axis_j.param_of(&back) - offset_j, curve.length);
                let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
                out.push((lo, hi));
            }
            out
        })
        .collect();

    let mut dedup = PairDedup::new();
    let mut result = Vec::new();
    for frame_out in raw {
        for (a, b) in frame_out {
            if dedup.insert(a, b) {
                result.push((a, b));
            }
        }
    }
    result.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(result)
}
