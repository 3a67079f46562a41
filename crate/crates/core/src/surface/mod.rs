//! Surfaces from Fenchel-Nielsen data.
//!
//! A surface is built by developing its pants graph: each pair of pants gets
//! the canonical matrix frame of [`pants::PantsFrame`], a spanning tree of
//! gluings places all pants in one global frame (each gluing translates by
//! the twist along the shared cuff and flips sides), and every gluing
//! outside the tree contributes a stable-letter generator. The cuff-matching
//! identities of all gluings are the relators of the resulting presentation;
//! their residuals certify the construction.

pub mod graph;
mod homology;
pub mod pants;

pub use graph::{FenchelNielsen, Gluing, PantsGraph, SurfaceSpecFile};
pub use pants::{build_pants, PantsFrame, YPiece};

use crate::config::{SearchParams, Tolerances};
use crate::curves::ClosedGeodesic;
use crate::deck::{orbit_ball, Ball};
use crate::error::{Error, Result};
use crate::hyp2::{MoebiusMap, PointH2};
use crate::words::{CurveClass, GenTable, Word};
use homology::HomologyMap;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// What kind of surface the holonomy group presents.
#[derive(Clone, Debug)]
pub enum SurfaceKind {
    /// Closed surface of genus `>= 2` with full Fenchel-Nielsen data.
    Closed(FenchelNielsen),
    /// One-holed torus with geodesic boundary; used by the reconstruction
    /// pipelines. `l_interior` and `twist` describe the gluing of the two
    /// equal cuffs, `l_boundary` the boundary geodesic.
    OneHoledTorus { l_interior: f64, twist: f64, l_boundary: f64 },
}

/// A collar neighborhood of a simple closed geodesic, isometric to the
/// cylinder `[-width, width] x (R / length Z)` in Fermi coordinates
/// `(r, theta)`: `r` is the signed distance from the core and `theta` the
/// arclength position of the foot of the perpendicular (stored in length
/// units, not radians).
#[derive(Clone, Debug)]
pub struct Collar {
    pub core: ClosedGeodesic,
    pub width: f64,
}

/// Standard embedded collar half-width for a simple closed geodesic.
pub fn collar_width(length: f64) -> f64 {
    (1.0 / (length / 2.0).sinh()).asinh()
}

struct Caches {
    balls: HashMap<u64, Arc<Ball>>,
    diameter: Option<f64>,
}

/// A developed hyperbolic surface: generator matrices, relators, pants
/// curves, and the search machinery built on top of them.
pub struct Surface {
    kind: SurfaceKind,
    gen_table: GenTable,
    gen_mats: Vec<MoebiusMap>,
    gen_invs: Vec<MoebiusMap>,
    relators: Vec<Word>,
    relator_residual: f64,
    pants_curves: Vec<ClosedGeodesic>,
    /// Curve classes of the stable-letter loops (one per gluing outside the
    /// spanning tree); convenient transversals to the pants curves.
    stable_classes: Vec<CurveClass>,
    boundary_classes: Vec<CurveClass>,
    homology: HomologyMap,
    basepoint: PointH2,
    pub tol: Tolerances,
    pub search: SearchParams,
    caches: Mutex<Caches>,
}

/// Internal gluing description used by both the closed and the one-holed
/// builders.
struct BuildSpec {
    /// Cuff lengths per pants slot.
    cuffs: Vec<[f64; 3]>,
    /// Gluings with their lengths and twists.
    gluings: Vec<(Gluing, f64, f64)>,
    /// Unglued slots: (pants, slot).
    boundary: Vec<(usize, u8)>,
}

impl Surface {
    /// Build a closed surface from Fenchel-Nielsen data.
    pub fn build(fn_data: &FenchelNielsen) -> Result<Surface> {
        let graph = &fn_data.graph;
        graph.validate()?;
        let mut cuffs = vec![[0.0f64; 3]; graph.num_pants];
        for (e, glu) in graph.gluings.iter().enumerate() {
            for &(p, s) in &glu.ends {
                cuffs[p][s as usize] = fn_data.lengths[e];
            }
        }
        let gluings = graph
            .gluings
            .iter()
            .enumerate()
            .map(|(e, glu)| (*glu, fn_data.lengths[e], fn_data.twists[e]))
            .collect();
        let spec = BuildSpec { cuffs, gluings, boundary: vec![] };
        Self::develop(SurfaceKind::Closed(fn_data.clone()), spec)
    }

    /// Build a one-holed torus with geodesic boundary: a single pair of
    /// pants `(l, l, l_boundary)` whose two equal cuffs are glued to each
    /// other with the given twist.
    pub fn one_holed_torus(l_interior: f64, twist: f64, l_boundary: f64) -> Result<Surface> {
        if !(l_interior > 0.0) || !(l_boundary > 0.0) {
            return Err(Error::BadFenchelNielsen("torus lengths must be positive".into()));
        }
        let spec = BuildSpec {
            cuffs: vec![[l_interior, l_interior, l_boundary]],
            gluings: vec![(Gluing { ends: [(0, 0), (0, 1)] }, l_interior, twist)],
            boundary: vec![(0, 2)],
        };
        Self::develop(SurfaceKind::OneHoledTorus { l_interior, twist, l_boundary }, spec)
    }

    fn develop(kind: SurfaceKind, spec: BuildSpec) -> Result<Surface> {
        let num_pants = spec.cuffs.len();
        let frames: Vec<PantsFrame> = spec
            .cuffs
            .iter()
            .map(|c| PantsFrame::new(c[0], c[1], c[2]))
            .collect::<Result<_>>()?;

        // Generator table: a{p}, b{p} per pants, then t{k} per non-tree gluing.
        let mut names: Vec<String> = Vec::new();
        for p in 0..num_pants {
            names.push(format!("a{}", p + 1));
            names.push(format!("b{}", p + 1));
        }

        // Develop along a spanning tree (BFS over gluings in index order).
        let mut placed: Vec<Option<MoebiusMap>> = vec![None; num_pants];
        placed[0] = Some(MoebiusMap::IDENTITY);
        let mut tree_edge = vec![false; spec.gluings.len()];
        let mut progress = true;
        while progress {
            progress = false;
            for (e, (glu, _len, twist)) in spec.gluings.iter().enumerate() {
                if tree_edge[e] {
                    continue;
                }
                let [(p0, s0), (p1, s1)] = glu.ends;
                let (from, sf, to, st) = match (placed[p0].is_some(), placed[p1].is_some()) {
                    (true, false) => (p0, s0, p1, s1),
                    (false, true) => (p1, s1, p0, s0),
                    _ => continue,
                };
                let n_from = &frames[from].slots[sf as usize].frame;
                let n_to = &frames[to].slots[st as usize].frame;
                let g = n_from
                    .compose(&MoebiusMap::axis_translation(*twist))
                    .compose(&MoebiusMap::half_turn())
                    .compose(&n_to.inverse());
                placed[to] = Some(placed[from].unwrap().compose(&g));
                tree_edge[e] = true;
                progress = true;
            }
        }
        if placed.iter().any(|p| p.is_none()) {
            return Err(Error::BadPantsGraph("pants graph is disconnected".into()));
        }
        let placements: Vec<MoebiusMap> = placed.into_iter().map(Option::unwrap).collect();

        // Global generator matrices for the pants generators.
        let mut gen_mats: Vec<MoebiusMap> = Vec::new();
        for (p, frame) in frames.iter().enumerate() {
            gen_mats.push(frame.gen_a.conjugate_by(&placements[p]));
            gen_mats.push(frame.gen_b.conjugate_by(&placements[p]));
        }

        // Stable letters for gluings outside the tree.
        let mut stable_letter_of_gluing: HashMap<usize, usize> = HashMap::new();
        for (e, (glu, _len, twist)) in spec.gluings.iter().enumerate() {
            if tree_edge[e] {
                continue;
            }
            let [(p0, s0), (p1, s1)] = glu.ends;
            let n0 = &frames[p0].slots[s0 as usize].frame;
            let n1 = &frames[p1].slots[s1 as usize].frame;
            let t = placements[p0]
                .compose(n0)
                .compose(&MoebiusMap::axis_translation(*twist))
                .compose(&MoebiusMap::half_turn())
                .compose(&n1.inverse())
                .compose(&placements[p1].inverse());
            let idx = gen_mats.len();
            gen_mats.push(t);
            names.push(format!("t{}", stable_letter_of_gluing.len() + 1));
            stable_letter_of_gluing.insert(e, idx);
        }

        let gen_table = GenTable::new(names)?;
        let gen_invs: Vec<MoebiusMap> = gen_mats.iter().map(|m| m.inverse()).collect();

        // Slot words in global letters.
        let slot_word = |p: usize, s: u8| -> Word {
            let local = &frames[p].slots[s as usize].word;
            Word::from_letters(local.iter().map(|&l| {
                let gen = 2 * p as i32 + l.abs(); // a{p} -> 2p+1, b{p} -> 2p+2
                if l > 0 {
                    gen
                } else {
                    -gen
                }
            }))
        };

        // Relators: one per gluing.
        let mut relators: Vec<Word> = Vec::new();
        for (e, (glu, _, _)) in spec.gluings.iter().enumerate() {
            let [(p0, s0), (p1, s1)] = glu.ends;
            let w0 = slot_word(p0, s0);
            let w1 = slot_word(p1, s1);
            let rel = match stable_letter_of_gluing.get(&e) {
                None => w0.concat(&w1),
                Some(&t_idx) => {
                    let t = Word::single((t_idx + 1) as i32);
                    t.concat(&w1).concat(&t.inverse()).concat(&w0)
                }
            };
            relators.push(rel);
        }

        let homology = HomologyMap::new(
            &relators.iter().map(|r| r.abelianized(gen_mats.len())).collect::<Vec<_>>(),
            gen_mats.len(),
        )?;

        let basepoint = PointH2 { x: 0.0, y: 1.0 };
        let tol = Tolerances::default();
        let search = SearchParams::default();

        let mut surface = Surface {
            kind,
            gen_table,
            gen_mats,
            gen_invs,
            relators,
            relator_residual: 0.0,
            pants_curves: Vec::new(),
            stable_classes: Vec::new(),
            boundary_classes: Vec::new(),
            homology,
            basepoint,
            tol,
            search,
            caches: Mutex::new(Caches { balls: HashMap::new(), diameter: None }),
        };

        // Relator residuals certify the development.
        let mut residual: f64 = 0.0;
        for rel in &surface.relators {
            residual = residual.max(surface.holonomy(rel).dist_to_identity());
        }
        surface.relator_residual = residual;
        if residual > 1e-9 {
            return Err(Error::RelatorCheckFailed { residual, tolerance: 1e-9 });
        }

        // Pants curves: one geodesic per gluing, from the ends[0] side; check
        // that the realized lengths reproduce the inputs.
        for (glu, len, _) in &spec.gluings {
            let (p, s) = glu.ends[0];
            let class = CurveClass::new(slot_word(p, s))?;
            let geo = ClosedGeodesic::from_class(&surface, &class, Some(true))?;
            if (geo.length - len).abs() > 1e-9 {
                return Err(Error::BadFenchelNielsen(format!(
                    "cuff length {} drifted from input {len}",
                    geo.length
                )));
            }
            surface.pants_curves.push(geo);
        }
        for (_, &t_idx) in stable_letter_of_gluing.iter() {
            surface
                .stable_classes
                .push(CurveClass::new(Word::single((t_idx + 1) as i32))?);
        }
        surface.stable_classes.sort();
        for &(p, s) in &spec.boundary {
            surface.boundary_classes.push(CurveClass::new(slot_word(p, s))?);
        }
        Ok(surface)
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }

    /// Fenchel-Nielsen data (closed surfaces only).
    pub fn fn_data(&self) -> Option<&FenchelNielsen> {
        match &self.kind {
            SurfaceKind::Closed(d) => Some(d),
            _ => None,
        }
    }

    pub fn genus(&self) -> usize {
        match &self.kind {
            SurfaceKind::Closed(d) => d.graph.genus(),
            SurfaceKind::OneHoledTorus { .. } => 1,
        }
    }

    pub fn num_generators(&self) -> usize {
        self.gen_mats.len()
    }

    pub fn gen_table(&self) -> &GenTable {
        &self.gen_table
    }

    pub fn relator_residual(&self) -> f64 {
        self.relator_residual
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn basepoint(&self) -> PointH2 {
        self.basepoint
    }

    /// The pants curve of gluing `i`.
    pub fn pants_curve(&self, i: usize) -> &ClosedGeodesic {
        &self.pants_curves[i]
    }

    pub fn pants_curves(&self) -> &[ClosedGeodesic] {
        &self.pants_curves
    }

    /// Stable-letter loops (transversal candidates), sorted.
    pub fn stable_classes(&self) -> &[CurveClass] {
        &self.stable_classes
    }

    /// Boundary classes (empty for closed surfaces).
    pub fn boundary_classes(&self) -> &[CurveClass] {
        &self.boundary_classes
    }

    pub fn generator(&self, idx: usize) -> &MoebiusMap {
        &self.gen_mats[idx]
    }

    /// Holonomy of a word (empty word gives the identity).
    pub fn holonomy(&self, word: &Word) -> MoebiusMap {
        let mut m = MoebiusMap::IDENTITY;
        for &l in word.letters() {
            let idx = l.unsigned_abs() as usize - 1;
            let g = if l > 0 { &self.gen_mats[idx] } else { &self.gen_invs[idx] };
            m = m.compose(g);
        }
        m
    }

    pub fn holonomy_of_class(&self, class: &CurveClass) -> MoebiusMap {
        self.holonomy(class.word())
    }

    /// Parse a curve word in the dot grammar (e.g. `a1.b1.A1.B1`).
    pub fn parse_curve(&self, text: &str) -> Result<CurveClass> {
        CurveClass::new(self.gen_table.parse(text)?)
    }

    pub fn format_class(&self, class: &CurveClass) -> String {
        self.gen_table.format(class.word())
    }

    /// Whether a class is separating (null-homologous).
    pub fn is_separating(&self, class: &CurveClass) -> bool {
        self.homology
            .is_null_homologous(&class.word().abelianized(self.num_generators()))
    }

    /// First-homology rank (should be `2g` for closed surfaces).
    pub fn homology_rank(&self) -> usize {
        self.homology.rank()
    }

    /// Symmetrized generator list for ball searches.
    pub(crate) fn symmetric_gens(&self) -> Vec<(i32, MoebiusMap)> {
        let mut v = Vec::with_capacity(2 * self.gen_mats.len());
        for (i, m) in self.gen_mats.iter().enumerate() {
            v.push(((i + 1) as i32, *m));
            v.push((-((i + 1) as i32), self.gen_invs[i]));
        }
        v
    }

    /// Orbit ball of the given radius, cached.
    pub fn ball(&self, radius: f64) -> Arc<Ball> {
        let key = radius.to_bits();
        {
            let caches = self.caches.lock().unwrap();
            if let Some(b) = caches.balls.get(&key) {
                return Arc::clone(b);
            }
        }
        let ball = Arc::new(orbit_ball(
            &self.symmetric_gens(),
            &self.basepoint,
            radius,
            self.search.bfs_slack,
        ));
        let mut caches = self.caches.lock().unwrap();
        Arc::clone(caches.balls.entry(key).or_insert(ball))
    }

    /// Estimated diameter of the surface: twice the radial extent of the
    /// Dirichlet domain at the basepoint, probed over a direction grid.
    pub fn diameter_estimate(&self) -> f64 {
        if let Some(d) = self.caches.lock().unwrap().diameter {
            return d;
        }
        let probe_ball = self.ball(9.0);
        let o = self.basepoint;
        let mut r_max: f64 = 0.0;
        let dirs = 48;
        for k in 0..dirs {
            let theta = std::f64::consts::PI * (k as f64 + 0.5) / dirs as f64;
            let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            let rot = MoebiusMap::new(c, s, -s, c).unwrap();
            // Radial point at distance t in this direction.
            let point_at = |t: f64| rot.apply(&PointH2 { x: 0.0, y: t.exp() });
            // Find the Dirichlet radial extent by bisection on
            // "o is the closest orbit point".
            let closest_is_o = |t: f64| {
                let p = point_at(t);
                let d0 = o.dist(&p);
                !probe_ball
                    .elements
                    .iter()
                    .skip(1)
                    .any(|e| e.mat.apply(&o).dist(&p) < d0 - 1e-12)
            };
            let mut lo = 0.0;
            let mut hi = 4.5;
            if closest_is_o(hi) {
                r_max = r_max.max(hi);
                continue;
            }
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                if closest_is_o(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            r_max = r_max.max(lo);
        }
        let d = 2.0 * r_max;
        self.caches.lock().unwrap().diameter = Some(d);
        d
    }

    /// Collar of a simple closed geodesic.
    pub fn collar(&self, core: &ClosedGeodesic) -> Result<Collar> {
        if !core.simple {
            return Err(Error::NotSimple(self.format_class(&core.class)));
        }
        Ok(Collar { core: core.clone(), width: collar_width(core.length) })
    }

    /// Nearest lift of `core` to the point `p` (both in the global frame):
    /// returns the translating ball element index, the signed distance, and
    /// the position of the foot along the core curve.
    pub(crate) fn nearest_lift(
        &self,
        core: &ClosedGeodesic,
        p: &PointH2,
        ball: &Ball,
    ) -> (MoebiusMap, f64, f64) {
        let mut best_r = f64::INFINITY;
        let mut best = (MoebiusMap::IDENTITY, 0.0f64, 0.0f64);
        for e in &ball.elements {
            let line = e.mat.apply_geodesic(&core.axis);
            let r = line.signed_dist(p);
            if r.abs() < best_r {
                best_r = r.abs();
                let foot = e.mat.inverse().apply(p);
                let theta = core.position_of(&foot);
                best = (e.mat, r, theta);
            }
        }
        best
    }

    /// Fermi coordinates of a point in a collar: signed distance `r` from
    /// the core and arclength position `theta` in `[0, length)`.
    pub fn fermi_coords(&self, collar: &Collar, p: &PointH2) -> Result<(f64, f64)> {
        let ball = self.ball(self.search.local_ball_radius);
        let (_, r, theta) = self.nearest_lift(&collar.core, p, &ball);
        if r.abs() > collar.width + 1e-12 {
            return Err(Error::OutsideCollar { r, width: collar.width });
        }
        Ok((r, theta))
    }
}

impl std::fmt::Debug for Surface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Surface")
            .field("kind", &self.kind)
            .field("generators", &self.gen_table)
            .field("relator_residual", &self.relator_residual)
            .finish()
    }
}
