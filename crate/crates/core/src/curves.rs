//! Closed geodesics, simplicity, intersection numbers, and Dehn twists.

use crate::error::{Error, Result};
use crate::hyp2::{GeodesicH2, MapClass, MoebiusMap, PointH2};
use crate::surface::Surface;
use crate::walk;
use crate::words::{CurveClass, Word};
use serde::{Deserialize, Serialize};

/// Handedness of the twist convention: exponent `+1` inserts the core curve
/// with this sign times the crossing sign. Calibrated once against the
/// collar model of the twist map (see the twist tests); flipping it swaps
/// the meaning of positive and negative twist counts everywhere.
pub const TWIST_HANDEDNESS: i64 = 1;

/// A closed geodesic: a free homotopy class together with its length, the
/// axis of the chosen holonomy representative, and its simplicity flag.
#[derive(Clone, Debug)]
pub struct ClosedGeodesic {
    pub class: CurveClass,
    pub length: f64,
    pub axis: GeodesicH2,
    pub simple: bool,
    /// Holonomy of the class representative.
    pub(crate) mat: MoebiusMap,
    /// Axis parameter of the marked origin (foot of the perpendicular from
    /// the surface basepoint); positions along the curve are measured from
    /// here, modulo the length.
    pub(crate) marked: f64,
}

impl ClosedGeodesic {
    /// Construct from a class. `simple_hint` skips the self-crossing search
    /// when the flag is already known (cuffs are embedded by construction;
    /// twists of simple curves stay simple).
    pub(crate) fn from_class(
        surface: &Surface,
        class: &CurveClass,
        simple_hint: Option<bool>,
    ) -> Result<ClosedGeodesic> {
        let mat = surface.holonomy_of_class(class);
        match mat.classify(1e-9) {
            MapClass::Hyperbolic => {}
            other => {
                return Err(Error::TrivialClass(format!(
                    "holonomy of {} is {:?}",
                    surface.format_class(class),
                    other
                )))
            }
        }
        let length = mat.translation_length()?;
        let axis = mat.axis()?;
        let marked = axis.param_of(&surface.basepoint());
        let mut geo = ClosedGeodesic { class: class.clone(), length, axis, simple: false, mat, marked };
        geo.simple = match simple_hint {
            Some(s) => s,
            None => walk::self_crossings(surface, &geo)?.is_empty(),
        };
        Ok(geo)
    }

    pub fn matrix(&self) -> &MoebiusMap {
        &self.mat
    }

    /// Position of (the projection of) a point along the curve, in
    /// `[0, length)` from the marked origin.
    pub fn position_of(&self, p: &PointH2) -> f64 {
        let mut s = (self.axis.param_of(p) - self.marked) % self.length;
        if s < 0.0 {
            s += self.length;
        }
        s
    }

    /// Point on the axis at curve position `s`.
    pub fn point_at(&self, s: f64) -> PointH2 {
        self.axis.point_at_param(self.marked + s)
    }
}

/// Geodesic representative of a free homotopy class; fails on classes whose
/// holonomy is not hyperbolic.
pub fn geodesic_rep(surface: &Surface, class: &CurveClass) -> Result<ClosedGeodesic> {
    ClosedGeodesic::from_class(surface, class, None)
}

/// Whether the geodesic representative of a class is simple (embedded).
pub fn is_simple(surface: &Surface, class: &CurveClass) -> Result<bool> {
    let geo = ClosedGeodesic::from_class(surface, class, Some(false))?;
    Ok(walk::self_crossings(surface, &geo)?.is_empty())
}

/// Geometric intersection number of two closed geodesics: the number of
/// transversal crossings of their geodesic representatives. Classes equal
/// as cyclic words (or inverse) count as 0.
pub fn geom_intersection(surface: &Surface, c1: &ClosedGeodesic, c2: &ClosedGeodesic) -> Result<usize> {
    // Deterministic role assignment keeps the count exactly symmetric.
    let swap = match c1.class.word().len().cmp(&c2.class.word().len()) {
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => c1.class.cyclic_key() > c2.class.cyclic_key(),
    };
    let (base, partner) = if swap { (c2, c1) } else { (c1, c2) };
    Ok(walk::crossings(surface, base, partner, &[])?.len())
}

/// A multi-twist: pairwise disjoint simple curves with integer exponents.
#[derive(Clone, Debug)]
pub struct TwistSpec {
    pub pairs: Vec<(ClosedGeodesic, i64)>,
}

impl TwistSpec {
    pub fn new(surface: &Surface, pairs: Vec<(ClosedGeodesic, i64)>) -> Result<TwistSpec> {
        for (i, (a, _)) in pairs.iter().enumerate() {
            if !a.simple {
                return Err(Error::NotSimple(surface.format_class(&a.class)));
            }
            for (j, (b, _)) in pairs.iter().enumerate().skip(i + 1) {
                let count = geom_intersection(surface, a, b)?;
                if count != 0 {
                    return Err(Error::PartnersIntersect { i, j, count });
                }
            }
        }
        Ok(TwistSpec { pairs })
    }

    pub fn single(surface: &Surface, curve: ClosedGeodesic, n: i64) -> Result<TwistSpec> {
        TwistSpec::new(surface, vec![(curve, n)])
    }
}

/// Dehn twist of a class along one simple curve: insert the core's word at
/// every crossing, with the exponent sign set by the crossing sign and the
/// global handedness.
fn twist_once(surface: &Surface, class: &CurveClass, core: &ClosedGeodesic, n: i64) -> Result<CurveClass> {
    if n == 0 {
        return Ok(class.clone());
    }
    let curve = ClosedGeodesic::from_class(surface, class, Some(true))?;
    let mut recs = walk::crossings(surface, core, &curve, &[])?;
    if recs.is_empty() {
        return Ok(class.clone());
    }
    // Order insertions along the partner's word path.
    recs.sort_by(|a, b| a.unwrapped.partial_cmp(&b.unwrapped).unwrap());

    let letters = class.word().letters();
    let mut out: Vec<i32> = Vec::new();
    let mut cursor = 0usize;
    for rec in &recs {
        let at = rec.frame.max(cursor).min(letters.len());
        out.extend_from_slice(&letters[cursor..at]);
        // The crossing was seen in frame `rec.frame`; expressing its core
        // conjugate at word position `at` costs conjugation by the letters
        // in between.
        let mid: Vec<i32> = letters[rec.frame..at].to_vec();
        let exponent = TWIST_HANDEDNESS * (rec.sign as i64) * n;
        let insertion = Word::from_letters(mid.iter().map(|&l| -l).rev())
            .concat(&rec.conj)
            .concat(&core.class.word().pow(exponent))
            .concat(&rec.conj.inverse())
            .concat(&Word::from_letters(mid.iter().copied()));
        out.extend_from_slice(insertion.letters());
        cursor = at;
    }
    out.extend_from_slice(&letters[cursor..]);
    CurveClass::new(Word::from_letters(out))
}

/// Apply a multi-twist to a class: the rightmost pair acts first, matching
/// composition of the twist maps (the curves are disjoint, so the order
/// only changes the class by conjugation).
pub fn dehn_twist(surface: &Surface, class: &CurveClass, spec: &TwistSpec) -> Result<CurveClass> {
    let mut current = class.clone();
    for (core, n) in spec.pairs.iter().rev() {
        current = twist_once(surface, &current, core, *n)?;
    }
    Ok(current)
}

/// Upper and (calibrated) lower bounds for the length of a twisted curve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwistLengthBounds {
    pub upper: f64,
    pub lower: f64,
    /// The lower bound only holds once every exponent exceeds its
    /// calibration constant.
    pub lower_valid: bool,
    /// Calibration constants per twist pair.
    pub k: Vec<i64>,
}

/// Length bounds for `T(beta)` under a multi-twist:
/// * upper: `sum_i iota(alpha_i, beta) |n_i| l(alpha_i) + l(beta)`, always valid;
/// * lower: `sum_i iota(alpha_i, beta) (|n_i| - k_i) l(alpha_i)` with `k_i`
///   estimated by [`calibrate_twist_constant`]; reported valid only when
///   every `|n_i| >= k_i`.
pub fn twist_length_bounds(
    surface: &Surface,
    beta: &ClosedGeodesic,
    spec: &TwistSpec,
    k: &[i64],
) -> Result<TwistLengthBounds> {
    assert_eq!(k.len(), spec.pairs.len());
    let mut upper = beta.length;
    let mut lower = 0.0;
    let mut lower_valid = true;
    for ((alpha, n), &ki) in spec.pairs.iter().zip(k) {
        let iota = geom_intersection(surface, alpha, beta)? as f64;
        upper += iota * n.unsigned_abs() as f64 * alpha.length;
        lower += iota * (n.unsigned_abs() as f64 - ki as f64) * alpha.length;
        if n.unsigned_abs() < ki as u64 {
            lower_valid = false;
        }
    }
    Ok(TwistLengthBounds { upper, lower, lower_valid, k: k.to_vec() })
}

/// Smallest integer `k` making the lower length bound hold over a twist
/// sweep `|n| <= sweep_max` of `beta` along `alpha`: measured lengths are
/// compared against `iota * (|n| - k) * l(alpha)`.
pub fn calibrate_twist_constant(
    surface: &Surface,
    alpha: &ClosedGeodesic,
    beta: &ClosedGeodesic,
    sweep_max: i64,
) -> Result<i64> {
    let iota = geom_intersection(surface, alpha, beta)? as f64;
    if iota == 0.0 {
        return Ok(0);
    }
    let mut k: i64 = 0;
    for n in 1..=sweep_max {
        for sgn in [1i64, -1] {
            let spec = TwistSpec { pairs: vec![(alpha.clone(), sgn * n)] };
            let twisted = dehn_twist(surface, &beta.class, &spec)?;
            let len = surface.holonomy_of_class(&twisted).translation_length()?;
            // need iota * (n - k) * l_alpha <= len, i.e. k >= n - len / (iota l).
            let need = (n as f64 - len / (iota * alpha.length)).ceil() as i64;
            k = k.max(need);
        }
    }
    Ok(k.max(0))
}
