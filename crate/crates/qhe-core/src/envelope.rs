//! Finite level windows of the banded envelope category of a filtered
//! algebra, and of its trivial extension.
//!
//! Objects are pairs (vertex, level) with the level running over a finite
//! window. For a filtration `A = I_0 > ... > I_N = 0` the hom space from
//! (x, i) to (y, j) with d = j - i is the subquotient `I_(max(d,0)) /
//! I_(N + min(d,0))` of the (x, y) path block, so morphisms vanish for
//! |d| >= N (the band property). Composition lifts to the algebra,
//! multiplies, and reduces into the target slot; well-definedness comes from
//! `I_a I_b <= I_(a+b)` and is re-checked by sampled lift-independence tests.
//!
//! The whole window is handled as one finite-dimensional algebra with local
//! units. Claims about the untruncated category are certified as: true at
//! every interior index, plus shift-invariance of the structure constants.

use crate::algebra::FiniteDimAlgebra;
use crate::filtration::IdealFiltration;
use crate::linalg::Subspace;
use crate::presentation::Tamper;
use crate::scalar::{vec_ops, FieldSpec, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnvelopeError {
    #[error("window [{lo}, {hi}] is too small for band {n}: need hi - lo >= {need}")]
    WindowTooSmall { lo: i64, hi: i64, n: usize, need: i64 },
    #[error("tamper references unknown vertex {0:?}")]
    TamperUnknownVertex(String),
    #[error("tamper references slot ({0}, {1}) -> ({2}, {3}) outside the window or band")]
    TamperBadSlot(String, i64, String, i64),
}

/// A finite level window with the band parameter and the interior margin
/// (fixed at twice the band) that keeps all certified objects boundary-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
    /// Length of the filtration the band comes from.
    pub n: usize,
}

impl Window {
    pub fn symmetric(half_width: i64, n: usize) -> Result<Self, EnvelopeError> {
        Window { lo: -half_width, hi: half_width, n }.validated()
    }

    pub fn validated(self) -> Result<Self, EnvelopeError> {
        let need = 4 * self.n as i64;
        if self.hi - self.lo < need {
            return Err(EnvelopeError::WindowTooSmall {
                lo: self.lo,
                hi: self.hi,
                n: self.n,
                need,
            });
        }
        Ok(self)
    }

    pub fn margin(&self) -> i64 {
        2 * self.n as i64
    }

    pub fn contains(&self, level: i64) -> bool {
        self.lo <= level && level <= self.hi
    }

    /// Interior levels: at least the margin away from both window edges.
    pub fn interior(&self, level: i64) -> bool {
        self.lo + self.margin() <= level && level <= self.hi - self.margin()
    }

    /// Levels whose projectives and standard modules fit inside the window.
    pub fn standard_ok(&self, level: i64) -> bool {
        self.lo + self.n as i64 <= level && level <= self.hi - self.n as i64
    }
}

/// One object of a windowed category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obj {
    pub vertex: usize,
    pub level: i64,
    pub tilded: bool,
    pub name: String,
}

/// A finite k-linear category with chosen hom bases. Composition is written
/// diagrammatically: `compose(u, v, w, f, g)` is "f then g".
pub trait Category: Sync {
    fn field(&self) -> FieldSpec;
    fn objects(&self) -> &[Obj];
    fn window(&self) -> &Window;
    fn hom_dim(&self, u: usize, v: usize) -> usize;
    fn compose(&self, u: usize, v: usize, w: usize, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar>;
    fn unit(&self, u: usize) -> Vec<Scalar>;
    /// Basis of the radical part of hom(u, v) in hom coordinates.
    fn radical_vectors(&self, u: usize, v: usize) -> Vec<Vec<Scalar>>;
    /// Short human-readable label of a hom-basis vector, for dumps.
    fn hom_label(&self, u: usize, v: usize, t: usize) -> String;

    fn object_at(&self, vertex: usize, level: i64) -> Option<usize> {
        self.objects().iter().position(|o| o.vertex == vertex && o.level == level)
    }
}

/// Total dimension of all hom spaces in the window.
pub fn total_hom_dim<C: Category + ?Sized>(cat: &C) -> usize {
    let n = cat.objects().len();
    (0..n).map(|u| (0..n).map(|v| cat.hom_dim(u, v)).sum::<usize>()).sum()
}

#[derive(Debug, Clone)]
struct SlotInfo {
    /// Indices into the adapted basis of the filtration.
    adapted_ids: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
struct ZeroRule {
    src_vertex: usize,
    mid_vertex: usize,
    mid_offset: i64,
    tgt_vertex: usize,
    tgt_offset: i64,
}

/// A finite window of the envelope category of a filtered algebra.
pub struct EnvelopeCat {
    pub algebra: Arc<FiniteDimAlgebra>,
    pub filtration: Arc<IdealFiltration>,
    win: Window,
    objects: Vec<Obj>,
    obj_index: BTreeMap<(usize, i64), usize>,
    slots: BTreeMap<(usize, usize), SlotInfo>,
    zero_rules: Vec<ZeroRule>,
}

/// Build the window of the envelope category over a validated filtration.
pub fn build_c(
    algebra: Arc<FiniteDimAlgebra>,
    filtration: Arc<IdealFiltration>,
    win: Window,
) -> Result<EnvelopeCat, EnvelopeError> {
    let win = win.validated()?;
    let n = filtration.n;
    debug_assert_eq!(win.n, n);
    let nv = algebra.vertex_names.len();
    let mut objects = Vec::new();
    let mut obj_index = BTreeMap::new();
    for level in win.lo..=win.hi {
        for vertex in 0..nv {
            let name = format!("({},{level})", algebra.vertex_names[vertex]);
            obj_index.insert((vertex, level), objects.len());
            objects.push(Obj { vertex, level, tilded: algebra.vertex_tilded[vertex], name });
        }
    }
    let mut slots = BTreeMap::new();
    for (u, ou) in objects.iter().enumerate() {
        for (v, ov) in objects.iter().enumerate() {
            let d = ov.level - ou.level;
            let (a, b) = slot_layers(n, d);
            if a >= b {
                continue;
            }
            let ids: Vec<usize> = filtration
                .adapted
                .block_index
                .get(&(ou.vertex, ov.vertex))
                .map(|ids| {
                    ids.iter()
                        .copied()
                        .filter(|&id| {
                            let l = filtration.adapted.vectors[id].layer;
                            a <= l && l < b
                        })
                        .collect()
                })
                .unwrap_or_default();
            if !ids.is_empty() {
                slots.insert((u, v), SlotInfo { adapted_ids: ids });
            }
        }
    }
    Ok(EnvelopeCat { algebra, filtration, win, objects, obj_index, slots, zero_rules: Vec::new() })
}

/// Lower and upper layer bounds of the slot subquotient for level offset d.
fn slot_layers(n: usize, d: i64) -> (usize, usize) {
    let a = d.max(0) as usize;
    let b = (n as i64 + d.min(0)).max(0) as usize;
    (a, b)
}

impl EnvelopeCat {
    pub fn object_id(&self, vertex: usize, level: i64) -> Option<usize> {
        self.obj_index.get(&(vertex, level)).copied()
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.algebra.vertex_names.iter().position(|v| v == name)
    }

    fn slot(&self, u: usize, v: usize) -> Option<&SlotInfo> {
        self.slots.get(&(u, v))
    }

    /// Lift hom coordinates to an algebra element (the adapted representative).
    pub fn lift(&self, u: usize, v: usize, coords: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec_ops::zeros(self.algebra.field, self.algebra.dim());
        if let Some(slot) = self.slot(u, v) {
            for (t, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    vec_ops::axpy(
                        &mut out,
                        c,
                        &self.filtration.adapted.vectors[slot.adapted_ids[t]].coords,
                    );
                }
            }
        }
        out
    }

    /// Reduce an algebra element into the slot (u, v): adapted coordinates,
    /// restricted to the slot's layer range.
    pub fn slot_coords(&self, u: usize, v: usize, vec: &[Scalar]) -> Vec<Scalar> {
        let Some(slot) = self.slot(u, v) else {
            return Vec::new();
        };
        let ad = self.filtration.adapted.adapted_coords(vec);
        slot.adapted_ids.iter().map(|&id| ad[id].clone()).collect()
    }

    pub fn apply_tamper(&mut self, tamper: &Tamper) -> Result<(), EnvelopeError> {
        match tamper {
            Tamper::ZeroComposition {
                src_vertex,
                mid_vertex,
                mid_offset,
                tgt_vertex,
                tgt_offset,
            } => {
                let sv = self
                    .vertex_id(src_vertex)
                    .ok_or_else(|| EnvelopeError::TamperUnknownVertex(src_vertex.clone()))?;
                let mv = self
                    .vertex_id(mid_vertex)
                    .ok_or_else(|| EnvelopeError::TamperUnknownVertex(mid_vertex.clone()))?;
                let tv = self
                    .vertex_id(tgt_vertex)
                    .ok_or_else(|| EnvelopeError::TamperUnknownVertex(tgt_vertex.clone()))?;
                self.zero_rules.push(ZeroRule {
                    src_vertex: sv,
                    mid_vertex: mv,
                    mid_offset: *mid_offset,
                    tgt_vertex: tv,
                    tgt_offset: *tgt_offset,
                });
                Ok(())
            }
            Tamper::DropHomVector { src_vertex, src_level, tgt_vertex, tgt_level, index } => {
                let sv = self
                    .vertex_id(src_vertex)
                    .ok_or_else(|| EnvelopeError::TamperUnknownVertex(src_vertex.clone()))?;
                let tv = self
                    .vertex_id(tgt_vertex)
                    .ok_or_else(|| EnvelopeError::TamperUnknownVertex(tgt_vertex.clone()))?;
                let bad = || {
                    EnvelopeError::TamperBadSlot(
                        src_vertex.clone(),
                        *src_level,
                        tgt_vertex.clone(),
                        *tgt_level,
                    )
                };
                let u = self.object_id(sv, *src_level).ok_or_else(bad)?;
                let v = self.object_id(tv, *tgt_level).ok_or_else(bad)?;
                let slot = self.slots.get_mut(&(u, v)).ok_or_else(bad)?;
                if *index >= slot.adapted_ids.len() {
                    return Err(bad());
                }
                slot.adapted_ids.remove(*index);
                if slot.adapted_ids.is_empty() {
                    self.slots.remove(&(u, v));
                }
                Ok(())
            }
        }
    }

    fn tampered(&self, u: usize, v: usize, w: usize) -> bool {
        if self.zero_rules.is_empty() {
            return false;
        }
        let (ou, ov, ow) = (&self.objects[u], &self.objects[v], &self.objects[w]);
        self.zero_rules.iter().any(|r| {
            ou.vertex == r.src_vertex
                && ov.vertex == r.mid_vertex
                && ow.vertex == r.tgt_vertex
                && ov.level - ou.level == r.mid_offset
                && ow.level - ou.level == r.tgt_offset
        })
    }

    /// Label of a slot basis vector without the slot decoration.
    pub fn slot_short_label(&self, u: usize, v: usize, t: usize) -> String {
        self.slot(u, v)
            .map(|s| self.filtration.adapted.vectors[s.adapted_ids[t]].label.clone())
            .unwrap_or_default()
    }

    /// The layer tag of each slot basis vector (its "ideal class").
    pub fn slot_layer_tags(&self, u: usize, v: usize) -> Vec<usize> {
        self.slot(u, v)
            .map(|s| {
                s.adapted_ids
                    .iter()
                    .map(|&id| self.filtration.adapted.vectors[id].layer)
                    .collect()
            })
            .unwrap_or_default()
    }
}

impl Category for EnvelopeCat {
    fn field(&self) -> FieldSpec {
        self.algebra.field
    }

    fn objects(&self) -> &[Obj] {
        &self.objects
    }

    fn window(&self) -> &Window {
        &self.win
    }

    fn hom_dim(&self, u: usize, v: usize) -> usize {
        self.slot(u, v).map_or(0, |s| s.adapted_ids.len())
    }

    fn compose(&self, u: usize, v: usize, w: usize, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
        let out_dim = self.hom_dim(u, w);
        if out_dim == 0 {
            return Vec::new();
        }
        if self.tampered(u, v, w) {
            return vec_ops::zeros(self.algebra.field, out_dim);
        }
        let lf = self.lift(u, v, f);
        let lg = self.lift(v, w, g);
        let prod = self.algebra.product_vec(&lf, &lg);
        self.slot_coords(u, w, &prod)
    }

    fn unit(&self, u: usize) -> Vec<Scalar> {
        let x = self.objects[u].vertex;
        self.slot_coords(u, u, &self.algebra.idem_vec(x))
    }

    fn radical_vectors(&self, u: usize, v: usize) -> Vec<Vec<Scalar>> {
        let Some(slot) = self.slot(u, v) else {
            return Vec::new();
        };
        let dim = slot.adapted_ids.len();
        let mut out = Vec::new();
        for (t, &id) in slot.adapted_ids.iter().enumerate() {
            if u != v || self.filtration.adapted.vectors[id].layer >= 1 {
                let mut e = vec_ops::zeros(self.algebra.field, dim);
                e[t] = self.algebra.field.one();
                out.push(e);
            }
        }
        out
    }

    fn hom_label(&self, u: usize, v: usize, t: usize) -> String {
        let slot = self.slot(u, v).expect("slot exists");
        let av = &self.filtration.adapted.vectors[slot.adapted_ids[t]];
        format!("({},{},{}->{})", av.label, av.layer, self.objects[u].name, self.objects[v].name)
    }
}

/// The opposite category view; right modules over a category are covariant
/// modules over its opposite.
pub struct Opposite<'a, C: Category + ?Sized>(pub &'a C);

impl<'a, C: Category + ?Sized> Category for Opposite<'a, C> {
    fn field(&self) -> FieldSpec {
        self.0.field()
    }
    fn objects(&self) -> &[Obj] {
        self.0.objects()
    }
    fn window(&self) -> &Window {
        self.0.window()
    }
    fn hom_dim(&self, u: usize, v: usize) -> usize {
        self.0.hom_dim(v, u)
    }
    fn compose(&self, u: usize, v: usize, w: usize, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
        self.0.compose(w, v, u, g, f)
    }
    fn unit(&self, u: usize) -> Vec<Scalar> {
        self.0.unit(u)
    }
    fn radical_vectors(&self, u: usize, v: usize) -> Vec<Vec<Scalar>> {
        self.0.radical_vectors(v, u)
    }
    fn hom_label(&self, u: usize, v: usize, t: usize) -> String {
        format!("op{}", self.0.hom_label(v, u, t))
    }
}

/// The trivial extension of a windowed category by its restricted dual
/// bimodule: hom(u, v) = base(u, v) + base(v, u)*, with
/// `(a, f)(b, g) = (ab, a.g + f.b)` where `(a.g)(c) = g(c a)` and
/// `(f.b)(c) = f(b c)`.
pub struct TrivExtCat {
    pub base: EnvelopeCat,
}

pub fn build_d(base: EnvelopeCat) -> TrivExtCat {
    TrivExtCat { base }
}

impl TrivExtCat {
    pub fn base_dim(&self, u: usize, v: usize) -> usize {
        self.base.hom_dim(u, v)
    }

    pub fn dual_dim(&self, u: usize, v: usize) -> usize {
        self.base.hom_dim(v, u)
    }

    /// Split hom coordinates into (base part, dual part).
    pub fn split<'v>(&self, u: usize, v: usize, f: &'v [Scalar]) -> (&'v [Scalar], &'v [Scalar]) {
        f.split_at(self.base_dim(u, v))
    }

    pub fn embed_base(&self, u: usize, v: usize, a: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec_ops::zeros(self.base.field(), self.hom_dim(u, v));
        out[..a.len()].clone_from_slice(a);
        out
    }

    pub fn embed_dual(&self, u: usize, v: usize, f: &[Scalar]) -> Vec<Scalar> {
        let nb = self.base_dim(u, v);
        let mut out = vec_ops::zeros(self.base.field(), self.hom_dim(u, v));
        out[nb..].clone_from_slice(f);
        out
    }

    /// Label of a hom-basis vector without the slot decoration; dual vectors
    /// are marked with a star.
    pub fn short_label(&self, u: usize, v: usize, t: usize) -> String {
        let nb = self.base_dim(u, v);
        if t < nb {
            self.base.slot_short_label(u, v, t)
        } else {
            format!("({})*", self.base.slot_short_label(v, u, t - nb))
        }
    }

    /// Whether a hom-basis vector belongs to the dual part.
    pub fn is_dual_index(&self, u: usize, v: usize, t: usize) -> bool {
        t >= self.base_dim(u, v)
    }
}

impl Category for TrivExtCat {
    fn field(&self) -> FieldSpec {
        self.base.field()
    }
    fn objects(&self) -> &[Obj] {
        self.base.objects()
    }
    fn window(&self) -> &Window {
        self.base.window()
    }
    fn hom_dim(&self, u: usize, v: usize) -> usize {
        self.base_dim(u, v) + self.dual_dim(u, v)
    }

    fn compose(&self, u: usize, v: usize, w: usize, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
        let field = self.field();
        let out_dim = self.hom_dim(u, w);
        if out_dim == 0 {
            return Vec::new();
        }
        let (a, fd) = self.split(u, v, f);
        let (b, gd) = self.split(v, w, g);
        let mut out = vec_ops::zeros(field, out_dim);
        let nb = self.base_dim(u, w);
        if !a.is_empty() && !b.is_empty() {
            let ab = self.base.compose(u, v, w, a, b);
            out[..nb].clone_from_slice(&ab);
        }
        let dual_n = self.dual_dim(u, w);
        if dual_n > 0 {
            for c in 0..dual_n {
                let mut cv = vec_ops::zeros(field, dual_n);
                cv[c] = field.one();
                let mut acc = field.zero();
                // (a.g)(c) = g(c a)
                if !a.is_empty() && !gd.is_empty() {
                    let ca = self.base.compose(w, u, v, &cv, a);
                    for (s, gs) in gd.iter().enumerate() {
                        if !gs.is_zero() && !ca[s].is_zero() {
                            acc = acc.add(&gs.mul(&ca[s]));
                        }
                    }
                }
                // (f.b)(c) = f(b c)
                if !fd.is_empty() && !b.is_empty() {
                    let bc = self.base.compose(v, w, u, b, &cv);
                    for (s, fs) in fd.iter().enumerate() {
                        if !fs.is_zero() && !bc[s].is_zero() {
                            acc = acc.add(&fs.mul(&bc[s]));
                        }
                    }
                }
                out[nb + c] = acc;
            }
        }
        out
    }

    fn unit(&self, u: usize) -> Vec<Scalar> {
        self.embed_base(u, u, &self.base.unit(u))
    }

    fn radical_vectors(&self, u: usize, v: usize) -> Vec<Vec<Scalar>> {
        let field = self.field();
        let dim = self.hom_dim(u, v);
        let nb = self.base_dim(u, v);
        let mut out = Vec::new();
        for r in self.base.radical_vectors(u, v) {
            let mut e = vec_ops::zeros(field, dim);
            e[..nb].clone_from_slice(&r);
            out.push(e);
        }
        for t in nb..dim {
            let mut e = vec_ops::zeros(field, dim);
            e[t] = field.one();
            out.push(e);
        }
        out
    }

    fn hom_label(&self, u: usize, v: usize, t: usize) -> String {
        let nb = self.base_dim(u, v);
        if t < nb {
            self.base.hom_label(u, v, t)
        } else {
            format!("({})*", self.base.hom_label(v, u, t - nb))
        }
    }
}

/// Dimension check of the band property: hom spaces vanish whenever the
/// level distance reaches the band.
pub fn band_check<C: Category + ?Sized>(cat: &C) -> bool {
    let objs = cat.objects();
    let n = cat.window().n as i64;
    for u in 0..objs.len() {
        for v in 0..objs.len() {
            let d = (objs[v].level - objs[u].level).abs();
            if d >= n && cat.hom_dim(u, v) != 0 {
                return false;
            }
        }
    }
    true
}

/// Shift invariance: slots one level up have identical dimensions and, for
/// composable pairs fully inside the window, identical structure constants.
pub fn shift_check<C: Category + ?Sized>(cat: &C) -> bool {
    let objs = cat.objects();
    let win = cat.window();
    let by_vl: BTreeMap<(usize, i64), usize> =
        objs.iter().enumerate().map(|(i, o)| ((o.vertex, o.level), i)).collect();
    let shifted = |i: usize| -> Option<usize> {
        let o = &objs[i];
        by_vl.get(&(o.vertex, o.level + 1)).copied()
    };
    for u in 0..objs.len() {
        for v in 0..objs.len() {
            if objs[u].level >= win.hi || objs[v].level >= win.hi {
                continue;
            }
            let (Some(u1), Some(v1)) = (shifted(u), shifted(v)) else { continue };
            if cat.hom_dim(u, v) != cat.hom_dim(u1, v1) {
                return false;
            }
        }
    }
    let field = cat.field();
    for u in 0..objs.len() {
        for v in 0..objs.len() {
            if cat.hom_dim(u, v) == 0 {
                continue;
            }
            for w in 0..objs.len() {
                if cat.hom_dim(v, w) == 0 {
                    continue;
                }
                if [u, v, w].iter().any(|&i| objs[i].level >= win.hi) {
                    continue;
                }
                let (Some(u1), Some(v1), Some(w1)) = (shifted(u), shifted(v), shifted(w)) else {
                    continue;
                };
                for s in 0..cat.hom_dim(u, v) {
                    let mut f = vec_ops::zeros(field, cat.hom_dim(u, v));
                    f[s] = field.one();
                    for t in 0..cat.hom_dim(v, w) {
                        let mut g = vec_ops::zeros(field, cat.hom_dim(v, w));
                        g[t] = field.one();
                        let a = cat.compose(u, v, w, &f, &g);
                        let b = cat.compose(u1, v1, w1, &f, &g);
                        if a != b {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Associativity on composable triples sampled with the given generator.
pub fn check_associativity_sampled<C: Category + ?Sized, R: Rng>(
    cat: &C,
    rng: &mut R,
    samples: usize,
) -> bool {
    let objs = cat.objects();
    let nonzero: Vec<(usize, usize)> = (0..objs.len())
        .flat_map(|u| (0..objs.len()).map(move |v| (u, v)))
        .filter(|&(u, v)| cat.hom_dim(u, v) > 0)
        .collect();
    let field = cat.field();
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < samples && attempts < samples * 20 {
        attempts += 1;
        let &(u, v) = nonzero.choose(rng).expect("category is nonempty");
        let outs: Vec<usize> = (0..objs.len()).filter(|&w| cat.hom_dim(v, w) > 0).collect();
        let Some(&w) = outs.choose(rng) else { continue };
        let outs2: Vec<usize> = (0..objs.len()).filter(|&x| cat.hom_dim(w, x) > 0).collect();
        let Some(&x) = outs2.choose(rng) else { continue };
        let rand_vec = |n: usize, rng: &mut R| -> Vec<Scalar> {
            (0..n).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect()
        };
        let f = rand_vec(cat.hom_dim(u, v), rng);
        let g = rand_vec(cat.hom_dim(v, w), rng);
        let h = rand_vec(cat.hom_dim(w, x), rng);
        let fg_h = cat.compose(u, w, x, &cat.compose(u, v, w, &f, &g), &h);
        let f_gh = cat.compose(u, v, x, &f, &cat.compose(v, w, x, &g, &h));
        if fg_h != f_gh {
            return false;
        }
        done += 1;
    }
    done == samples
}

/// Sampled lift-independence: perturbing a lift by the slot's reduction
/// ideal must not change any product.
pub fn check_lift_independence<R: Rng>(cat: &EnvelopeCat, rng: &mut R, samples: usize) -> bool {
    let objs = cat.objects().len();
    let n = cat.filtration.n;
    let field = cat.field();
    let quotient_slots: Vec<(usize, usize, usize)> = (0..objs)
        .flat_map(|u| (0..objs).map(move |v| (u, v)))
        .filter_map(|(u, v)| {
            let d = cat.objects()[v].level - cat.objects()[u].level;
            let (_, b) = slot_layers(n, d);
            (cat.hom_dim(u, v) > 0 && b < n).then_some((u, v, b))
        })
        .collect();
    if quotient_slots.is_empty() {
        return true;
    }
    for _ in 0..samples {
        let &(u, v, b) = quotient_slots.choose(rng).expect("nonempty");
        let fdim = cat.hom_dim(u, v);
        let f: Vec<Scalar> = (0..fdim).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect();
        let lift = cat.lift(u, v, &f);
        // random perturbation inside I_b of the same vertex block
        let mut pert = lift.clone();
        let block = (cat.objects()[u].vertex, cat.objects()[v].vertex);
        if let Some(ids) = cat.filtration.adapted.block_index.get(&block) {
            for &id in ids {
                let av = &cat.filtration.adapted.vectors[id];
                if av.layer >= b {
                    let c = field.from_i64(rng.gen_range(-2..=2));
                    vec_ops::axpy(&mut pert, &c, &av.coords);
                }
            }
        }
        for w in 0..objs {
            if cat.hom_dim(v, w) > 0 {
                for t in 0..cat.hom_dim(v, w) {
                    let mut g = vec_ops::zeros(field, cat.hom_dim(v, w));
                    g[t] = field.one();
                    let lg = cat.lift(v, w, &g);
                    let p1 = cat.slot_coords(u, w, &cat.algebra.product_vec(&lift, &lg));
                    let p2 = cat.slot_coords(u, w, &cat.algebra.product_vec(&pert, &lg));
                    if p1 != p2 {
                        return false;
                    }
                }
            }
            if cat.hom_dim(w, u) > 0 {
                for t in 0..cat.hom_dim(w, u) {
                    let mut g = vec_ops::zeros(field, cat.hom_dim(w, u));
                    g[t] = field.one();
                    let lg = cat.lift(w, u, &g);
                    let p1 = cat.slot_coords(w, v, &cat.algebra.product_vec(&lg, &lift));
                    let p2 = cat.slot_coords(w, v, &cat.algebra.product_vec(&lg, &pert));
                    if p1 != p2 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Exhaustive check, on the unreduced model, that the reduction ideal is a
/// two-sided ideal of the unquotiented band category: products of full slots
/// with ideal slots land in ideal slots.
pub fn check_reduction_ideal(alg: &FiniteDimAlgebra, filt: &IdealFiltration, win: &Window) -> bool {
    let n = filt.n;
    let b_layer = |d: i64| -> usize { (d.max(0) as usize).min(n) };
    let j_layer = |d: i64| -> usize { ((n as i64 + d.min(0)).max(0) as usize).min(n) };
    for i in win.lo..=win.hi {
        for j in win.lo..=win.hi {
            for l in win.lo..=win.hi {
                let (d1, d2, d) = (j - i, l - j, l - i);
                let b1 = &filt.layers[b_layer(d1)];
                let j1 = &filt.layers[j_layer(d1)];
                let b2 = &filt.layers[b_layer(d2)];
                let j2 = &filt.layers[j_layer(d2)];
                let jt = &filt.layers[j_layer(d)];
                for u in b1.basis() {
                    for v in j2.basis() {
                        if !jt.contains(&alg.product_vec(u, v)) {
                            return false;
                        }
                    }
                }
                for u in j1.basis() {
                    for v in b2.basis() {
                        if !jt.contains(&alg.product_vec(u, v)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Dual-action bookkeeping of the restricted dual: on sampled composable
/// tuples, `(a.f.b)(c) = f(b c a)` holds in the trivial extension.
pub fn check_dual_action<R: Rng>(cat: &TrivExtCat, rng: &mut R, samples: usize) -> bool {
    let objs = cat.objects().len();
    let field = cat.field();
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < samples && attempts < samples * 50 {
        attempts += 1;
        let s = rng.gen_range(0..objs);
        let u = rng.gen_range(0..objs);
        let v = rng.gen_range(0..objs);
        let t = rng.gen_range(0..objs);
        // a: s -> u, f in base(v, u)* inside hom(u, v), b: v -> t, c: t -> s
        if cat.base.hom_dim(s, u) == 0
            || cat.base.hom_dim(v, u) == 0
            || cat.base.hom_dim(v, t) == 0
            || cat.base.hom_dim(t, s) == 0
        {
            continue;
        }
        let rand_vec = |n: usize, rng: &mut R| -> Vec<Scalar> {
            (0..n).map(|_| field.from_i64(rng.gen_range(-2..=2))).collect()
        };
        let a = rand_vec(cat.base.hom_dim(s, u), rng);
        let f = rand_vec(cat.base.hom_dim(v, u), rng);
        let b = rand_vec(cat.base.hom_dim(v, t), rng);
        let c = rand_vec(cat.base.hom_dim(t, s), rng);
        let af = cat.compose(s, u, v, &cat.embed_base(s, u, &a), &cat.embed_dual(u, v, &f));
        let afb = cat.compose(s, v, t, &af, &cat.embed_base(v, t, &b));
        let (_, afb_dual) = cat.split(s, t, &afb);
        // f(b c a), evaluated through the base category
        let bc = cat.base.compose(v, t, s, &b, &c);
        let bca = cat.base.compose(v, s, u, &bc, &a);
        let mut expected = field.zero();
        for (i, fi) in f.iter().enumerate() {
            if !fi.is_zero() && !bca[i].is_zero() {
                expected = expected.add(&fi.mul(&bca[i]));
            }
        }
        let mut got = field.zero();
        for (i, ci) in c.iter().enumerate() {
            if !ci.is_zero() && !afb_dual[i].is_zero() {
                got = got.add(&ci.mul(&afb_dual[i]));
            }
        }
        if got != expected {
            return false;
        }
        done += 1;
    }
    true
}

/// Serializable dump of a windowed category: objects, hom dimensions, basis
/// labels, and composition tables. Used for golden tests.
#[derive(Serialize)]
pub struct CategoryDump {
    pub convention: &'static str,
    pub window: Window,
    pub objects: Vec<String>,
    pub hom: Vec<HomDump>,
    pub composition: Vec<CompositionDump>,
}

#[derive(Serialize)]
pub struct HomDump {
    pub src: String,
    pub tgt: String,
    pub dim: usize,
    pub basis: Vec<String>,
}

#[derive(Serialize)]
pub struct CompositionDump {
    pub first: String,
    pub then: String,
    pub result: Vec<(String, String)>,
}

pub fn dump_category<C: Category + ?Sized>(cat: &C, with_composition: bool) -> CategoryDump {
    let objs = cat.objects();
    let field = cat.field();
    let mut hom = Vec::new();
    let mut composition = Vec::new();
    for u in 0..objs.len() {
        for v in 0..objs.len() {
            let d = cat.hom_dim(u, v);
            if d == 0 {
                continue;
            }
            hom.push(HomDump {
                src: objs[u].name.clone(),
                tgt: objs[v].name.clone(),
                dim: d,
                basis: (0..d).map(|t| cat.hom_label(u, v, t)).collect(),
            });
            if !with_composition {
                continue;
            }
            for w in 0..objs.len() {
                let dw = cat.hom_dim(v, w);
                if dw == 0 {
                    continue;
                }
                for s in 0..d {
                    let mut f = vec_ops::zeros(field, d);
                    f[s] = field.one();
                    for t in 0..dw {
                        let mut g = vec_ops::zeros(field, dw);
                        g[t] = field.one();
                        let r = cat.compose(u, v, w, &f, &g);
                        let result: Vec<(String, String)> = r
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(i, c)| (cat.hom_label(u, w, i), c.to_string()))
                            .collect();
                        if !result.is_empty() {
                            composition.push(CompositionDump {
                                first: cat.hom_label(u, v, s),
                                then: cat.hom_label(v, w, t),
                                result,
                            });
                        }
                    }
                }
            }
        }
    }
    CategoryDump {
        convention: "composition is diagrammatic (f then g); levels are internal (quotient-type slots decrease level)",
        window: *cat.window(),
        objects: objs.iter().map(|o| o.name.clone()).collect(),
        hom,
        composition,
    }
}

/// Subspace helper in a hom slot's coordinates.
pub fn hom_subspace<C: Category + ?Sized>(
    cat: &C,
    u: usize,
    v: usize,
    vecs: &[Vec<Scalar>],
) -> Subspace {
    Subspace::from_vectors(cat.field(), cat.hom_dim(u, v), vecs)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::algebra::compute_basis;
    use crate::filtration::radical_filtration;

    pub fn envelope_of(p: crate::presentation::AlgebraPresentation, half_width: i64) -> EnvelopeCat {
        let alg = Arc::new(compute_basis(&p.validate().unwrap()).unwrap());
        let filt = Arc::new(radical_filtration(&alg).unwrap());
        let win = Window::symmetric(half_width, filt.n).unwrap();
        build_c(alg, filt, win).unwrap()
    }

    pub fn envelope_of_tilde(
        p: &crate::presentation::AlgebraPresentation,
        half_width: i64,
    ) -> EnvelopeCat {
        let t = crate::tilde::tilde_extension(p).unwrap();
        let alg = Arc::new(t.extended);
        let filt = Arc::new(t.extended_filtration);
        let win = Window::symmetric(half_width, filt.n).unwrap();
        build_c(alg, filt, win).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::envelope_of;
    use super::*;
    use crate::algebra::compute_basis;
    use crate::filtration::radical_filtration;
    use crate::presentation::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn envelope_of_k_is_diagonal() {
        let c = envelope_of(fixtures::k(), 2);
        assert_eq!(c.objects().len(), 5);
        assert_eq!(total_hom_dim(&c), 5);
        for u in 0..5 {
            for v in 0..5 {
                assert!(c.radical_vectors(u, v).is_empty());
            }
        }
    }

    #[test]
    fn envelope_of_d_hom_dimensions() {
        let c = envelope_of(fixtures::d(), 4);
        let u = c.object_id(0, 0).unwrap();
        assert_eq!(c.hom_dim(u, u), 2);
        let up = c.object_id(0, 1).unwrap();
        let down = c.object_id(0, -1).unwrap();
        assert_eq!(c.hom_dim(u, up), 1);
        assert_eq!(c.hom_dim(u, down), 1);
        assert_eq!(c.hom_dim(up, u), 1);
        // three consecutive levels contribute 3*2 + 4*1 = 10
        let mut total = 0;
        for i in 0..3 {
            for j in 0..3 {
                let a = c.object_id(0, i).unwrap();
                let b = c.object_id(0, j).unwrap();
                total += c.hom_dim(a, b);
            }
        }
        assert_eq!(total, 10);
    }

    #[test]
    fn envelope_of_a2_entry_dimensions() {
        let c = envelope_of(fixtures::a2(), 4);
        let u = c.object_id(0, 0).unwrap();
        assert_eq!(c.hom_dim(u, u), 1);
        let w = c.object_id(1, 0).unwrap();
        assert_eq!(c.hom_dim(u, w), 1);
        assert_eq!(c.hom_dim(w, u), 0);
        let w_up = c.object_id(1, 1).unwrap();
        assert_eq!(c.hom_dim(u, w_up), 1);
        let u_down = c.object_id(0, -1).unwrap();
        assert_eq!(c.hom_dim(u, u_down), 1);
        let w_down = c.object_id(1, -1).unwrap();
        assert_eq!(c.hom_dim(w, w_down), 1);
        assert_eq!(c.hom_dim(u, w_down), 0);
    }

    #[test]
    fn band_and_shift_hold_for_corpus() {
        for p in [fixtures::k(), fixtures::d(), fixtures::a2()] {
            let c = envelope_of(p, 4);
            assert!(band_check(&c));
            assert!(shift_check(&c));
        }
    }

    #[test]
    fn associativity_and_lift_independence_sampled() {
        let c = envelope_of(fixtures::a2(), 4);
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        assert!(check_associativity_sampled(&c, &mut rng, 500));
        assert!(check_lift_independence(&c, &mut rng, 100));
    }

    #[test]
    fn reduction_ideal_is_two_sided() {
        for p in [fixtures::d(), fixtures::a2()] {
            let alg = Arc::new(compute_basis(&p.validate().unwrap()).unwrap());
            let filt = Arc::new(radical_filtration(&alg).unwrap());
            let win = Window { lo: -2, hi: 2, n: filt.n };
            assert!(check_reduction_ideal(&alg, &filt, &win));
        }
    }

    #[test]
    fn dropping_a_hom_vector_breaks_shift_invariance() {
        let mut c = envelope_of(fixtures::d(), 4);
        assert!(shift_check(&c));
        c.apply_tamper(&Tamper::DropHomVector {
            src_vertex: "1".into(),
            src_level: 0,
            tgt_vertex: "1".into(),
            tgt_level: 1,
            index: 0,
        })
        .unwrap();
        assert!(!shift_check(&c));
    }

    #[test]
    fn trivial_extension_over_k_is_dual_numbers_per_object() {
        let c = envelope_of(fixtures::k(), 2);
        let d = build_d(c);
        for u in 0..d.objects().len() {
            assert_eq!(d.hom_dim(u, u), 2);
            let f = d.embed_dual(u, u, &[d.field().one()]);
            let sq = d.compose(u, u, u, &f, &f);
            assert!(vec_ops::is_zero(&sq));
            let e = d.unit(u);
            assert_eq!(d.compose(u, u, u, &e, &f), f);
        }
    }

    #[test]
    fn dual_action_matches_composition() {
        let c = envelope_of(fixtures::a2(), 4);
        let d = build_d(c);
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        assert!(check_dual_action(&d, &mut rng, 200));
        assert!(check_associativity_sampled(&d, &mut rng, 300));
    }

    #[test]
    fn opposite_category_composes_backwards() {
        let c = envelope_of(fixtures::a2(), 4);
        let op = Opposite(&c);
        assert_eq!(total_hom_dim(&c), total_hom_dim(&op));
        assert!(band_check(&op));
    }
}
