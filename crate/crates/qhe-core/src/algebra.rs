//! Finite-dimensional quiver algebras with relations: basis construction by
//! length-graded linear reduction, structure constants, idempotents, corner
//! subalgebras and idempotent quotients.
//!
//! Multiplication is written in traversal order: `u * v` is "traverse u, then
//! v", so a path from x to y satisfies `e_x * p * e_y = p`. Hom-sets of the
//! underlying category are `A(x,y) = e_y * A * e_x`. All orientation-sensitive
//! outputs (per-side Loewy lengths, left/right projectives) are stated
//! relative to this convention, and every certificate header repeats it.

use crate::linalg::{rref, Mat, Subspace};
use crate::presentation::{ArrowData, Relation, ValidatedPresentation};
use crate::scalar::{vec_ops, FieldSpec, Scalar};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("dimension did not stabilize: new basis elements still appear at degree cap {cap}")]
    DimensionNotStabilized { cap: u32 },
    #[error("a relation term has length {len} exceeding degree cap {cap}")]
    RelationBeyondCap { len: usize, cap: u32 },
    #[error("path enumeration exceeded {0} paths; raise relations or lower degree_cap")]
    TooManyPaths(usize),
    #[error("vertex {0:?} collapses to zero in the quotient algebra")]
    VertexCollapsed(String),
    #[error("non-split simple detected: semisimple top is not spanned by the vertex idempotents ({detail})")]
    NonSplitSimple { detail: String },
    #[error("basis element {0} has no single-path reduction; trace entries must reduce to a scalar multiple of one basis element")]
    TraceEntryNotMonomial(String),
    #[error("empty trace path is ambiguous: algebra has {0} vertices")]
    AmbiguousEmptyPath(usize),
}

/// One basis element: a reduced path with its endpoints and gradings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisPath {
    pub arrows: Vec<usize>,
    pub src: usize,
    pub tgt: usize,
    pub len: u32,
    pub degree: u32,
    pub label: String,
}

#[derive(Debug, Clone)]
pub struct FiniteDimAlgebra {
    pub field: FieldSpec,
    pub vertex_names: Vec<String>,
    pub vertex_tilded: Vec<bool>,
    pub arrows: Vec<ArrowData>,
    pub arrow_names: Vec<String>,
    pub basis: Vec<BasisPath>,
    /// Basis index of each vertex idempotent.
    pub idem: Vec<usize>,
    pub relations: Vec<Relation>,
    mul: Vec<Vec<Vec<Scalar>>>,
    /// prepend[a][b] = coordinates of (arrow a) * (basis b).
    prepend: Vec<Vec<Vec<Scalar>>>,
}

impl FiniteDimAlgebra {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        field: FieldSpec,
        vertex_names: Vec<String>,
        vertex_tilded: Vec<bool>,
        arrows: Vec<ArrowData>,
        arrow_names: Vec<String>,
        basis: Vec<BasisPath>,
        idem: Vec<usize>,
        mul: Vec<Vec<Vec<Scalar>>>,
        prepend: Vec<Vec<Vec<Scalar>>>,
    ) -> Self {
        FiniteDimAlgebra {
            field,
            vertex_names,
            vertex_tilded,
            arrows,
            arrow_names,
            basis,
            idem,
            relations: Vec::new(),
            mul,
            prepend,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec_ops::zeros(self.field, self.dim())
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        v[i] = self.field.one();
        v
    }

    pub fn idem_vec(&self, x: usize) -> Vec<Scalar> {
        self.basis_vec(self.idem[x])
    }

    pub fn unit_vec(&self) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        for &i in &self.idem {
            v[i] = self.field.one();
        }
        v
    }

    pub fn product_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.mul[i][j]
    }

    pub fn product_vec(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vec();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai.mul(bj);
                vec_ops::axpy(&mut out, &c, &self.mul[i][j]);
            }
        }
        out
    }

    /// Reduce an arbitrary path (list of arrow indices) to basis coordinates.
    pub fn reduce_path(&self, arrows: &[usize]) -> Vec<Scalar> {
        if arrows.is_empty() {
            return self.unit_vec();
        }
        for w in 1..arrows.len() {
            if self.arrows[arrows[w - 1]].tgt != self.arrows[arrows[w]].src {
                return self.zero_vec();
            }
        }
        let mut v = {
            let last = *arrows.last().unwrap();
            self.prepend[last][self.idem[self.arrows[last].tgt]].clone()
        };
        for &a in arrows[..arrows.len() - 1].iter().rev() {
            v = self.prepend_arrow(a, &v);
        }
        v
    }

    fn prepend_arrow(&self, a: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vec();
        for (j, c) in v.iter().enumerate() {
            if !c.is_zero() {
                vec_ops::axpy(&mut out, c, &self.prepend[a][j]);
            }
        }
        out
    }

    pub fn vertex_block(&self, src: usize, tgt: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].src == src && self.basis[i].tgt == tgt).collect()
    }

    /// Matrix of left multiplication by `v` acting on the whole algebra.
    pub fn left_mul_matrix(&self, v: &[Scalar]) -> Mat {
        let n = self.dim();
        let mut m = Mat::zeros(self.field, n, n);
        for j in 0..n {
            let col = self.product_vec(v, &self.basis_vec(j));
            for i in 0..n {
                *m.at_mut(i, j) = col[i].clone();
            }
        }
        m
    }

    pub fn right_mul_matrix(&self, v: &[Scalar]) -> Mat {
        let n = self.dim();
        let mut m = Mat::zeros(self.field, n, n);
        for j in 0..n {
            let col = self.product_vec(&self.basis_vec(j), v);
            for i in 0..n {
                *m.at_mut(i, j) = col[i].clone();
            }
        }
        m
    }

    /// Smallest two-sided ideal containing the given vectors.
    pub fn ideal_closure(&self, generators: &[Vec<Scalar>]) -> Subspace {
        let mut s = Subspace::from_vectors(self.field, self.dim(), generators);
        loop {
            let mut grew = false;
            let current = s.basis().to_vec();
            for v in &current {
                for b in 0..self.dim() {
                    let left = self.product_vec(&self.basis_vec(b), v);
                    if !vec_ops::is_zero(&left) {
                        grew |= s.add_vector(&left);
                    }
                    let right = self.product_vec(v, &self.basis_vec(b));
                    if !vec_ops::is_zero(&right) {
                        grew |= s.add_vector(&right);
                    }
                }
            }
            if !grew {
                return s;
            }
        }
    }

    pub fn check_associativity_exhaustive(&self) -> Result<(), (usize, usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul[i][j].clone();
                for k in 0..n {
                    let left = self.product_vec(&ij, &self.basis_vec(k));
                    let right = self.product_vec(&self.basis_vec(i), &self.mul[j][k]);
                    if left != right {
                        return Err((i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Corner algebra on a subset of vertices: all paths that start and end
    /// inside the subset, with the induced multiplication.
    pub fn corner_on_vertices(&self, keep: &[usize]) -> FiniteDimAlgebra {
        let keep_set: Vec<bool> = (0..self.vertex_names.len()).map(|v| keep.contains(&v)).collect();
        let basis_idx: Vec<usize> = (0..self.dim())
            .filter(|&i| keep_set[self.basis[i].src] && keep_set[self.basis[i].tgt])
            .collect();
        self.restrict_to_basis_subset(&basis_idx, keep)
    }

    /// Quotient by the two-sided ideal generated by the idempotents of the
    /// given vertices. The surviving basis is the echelon complement, which
    /// here is always a subset of the original path basis.
    pub fn idempotent_quotient(&self, kill: &[usize]) -> Result<FiniteDimAlgebra, AlgebraError> {
        let gens: Vec<Vec<Scalar>> = kill.iter().map(|&k| self.idem_vec(k)).collect();
        let ideal = self.ideal_closure(&gens);
        let complement = ideal.complement_coords();
        // Representatives must be plain basis paths for the quotient to keep
        // the path-basis shape; pivoted coordinates are projected away.
        let keep_vertices: Vec<usize> =
            (0..self.vertex_names.len()).filter(|v| !kill.contains(v)).collect();
        for &i in &complement {
            let b = &self.basis[i];
            if kill.contains(&b.src) || kill.contains(&b.tgt) {
                return Err(AlgebraError::NonSplitSimple {
                    detail: format!("idempotent quotient has non-path representative {}", b.label),
                });
            }
        }
        let quotient = self.quotient_by_ideal(&ideal, &complement, &keep_vertices)?;
        Ok(quotient)
    }

    fn quotient_by_ideal(
        &self,
        ideal: &Subspace,
        complement: &[usize],
        keep_vertices: &[usize],
    ) -> Result<FiniteDimAlgebra, AlgebraError> {
        let reindex: BTreeMap<usize, usize> =
            complement.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let project = |v: &[Scalar]| -> Vec<Scalar> { ideal.quotient_coords(v) };
        let n = complement.len();
        let mut mul = vec![vec![Vec::new(); n]; n];
        for (i, &bi) in complement.iter().enumerate() {
            for (j, &bj) in complement.iter().enumerate() {
                mul[i][j] = project(&self.mul[bi][bj]);
            }
        }
        let vertex_map: BTreeMap<usize, usize> =
            keep_vertices.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut idem = Vec::new();
        for &old_v in keep_vertices {
            let old_idx = self.idem[old_v];
            let new_idx = reindex.get(&old_idx).copied().ok_or_else(|| {
                AlgebraError::VertexCollapsed(self.vertex_names[old_v].clone())
            })?;
            idem.push(new_idx);
        }
        let basis: Vec<BasisPath> = complement
            .iter()
            .map(|&old| {
                let b = &self.basis[old];
                BasisPath {
                    arrows: b.arrows.clone(),
                    src: vertex_map[&b.src],
                    tgt: vertex_map[&b.tgt],
                    len: b.len,
                    degree: b.degree,
                    label: b.label.clone(),
                }
            })
            .collect();
        let mut prepend = Vec::new();
        for a in 0..self.arrows.len() {
            let mut per = Vec::new();
            for &bj in complement {
                per.push(project(&self.prepend[a][bj]));
            }
            prepend.push(per);
        }
        Ok(FiniteDimAlgebra {
            field: self.field,
            vertex_names: keep_vertices.iter().map(|&v| self.vertex_names[v].clone()).collect(),
            vertex_tilded: keep_vertices.iter().map(|&v| self.vertex_tilded[v]).collect(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowData {
                    src: *vertex_map.get(&a.src).unwrap_or(&usize::MAX),
                    tgt: *vertex_map.get(&a.tgt).unwrap_or(&usize::MAX),
                    degree: a.degree,
                })
                .collect(),
            arrow_names: self.arrow_names.clone(),
            basis,
            idem,
            relations: Vec::new(),
            mul,
            prepend,
        })
    }

    fn restrict_to_basis_subset(&self, basis_idx: &[usize], keep_vertices: &[usize]) -> FiniteDimAlgebra {
        let reindex: BTreeMap<usize, usize> =
            basis_idx.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let vertex_map: BTreeMap<usize, usize> =
            keep_vertices.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let restrict = |v: &[Scalar]| -> Vec<Scalar> {
            basis_idx.iter().map(|&i| v[i].clone()).collect()
        };
        let n = basis_idx.len();
        let mut mul = vec![vec![Vec::new(); n]; n];
        for (i, &bi) in basis_idx.iter().enumerate() {
            for (j, &bj) in basis_idx.iter().enumerate() {
                mul[i][j] = restrict(&self.mul[bi][bj]);
            }
        }
        let mut prepend = Vec::new();
        for a in 0..self.arrows.len() {
            let mut per = Vec::new();
            for &bj in basis_idx {
                per.push(restrict(&self.prepend[a][bj]));
            }
            prepend.push(per);
        }
        FiniteDimAlgebra {
            field: self.field,
            vertex_names: keep_vertices.iter().map(|&v| self.vertex_names[v].clone()).collect(),
            vertex_tilded: keep_vertices.iter().map(|&v| self.vertex_tilded[v]).collect(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowData {
                    src: *vertex_map.get(&a.src).unwrap_or(&usize::MAX),
                    tgt: *vertex_map.get(&a.tgt).unwrap_or(&usize::MAX),
                    degree: a.degree,
                })
                .collect(),
            arrow_names: self.arrow_names.clone(),
            basis: basis_idx
                .iter()
                .map(|&old| {
                    let b = &self.basis[old];
                    BasisPath {
                        arrows: b.arrows.clone(),
                        src: vertex_map[&b.src],
                        tgt: vertex_map[&b.tgt],
                        len: b.len,
                        degree: b.degree,
                        label: b.label.clone(),
                    }
                })
                .collect(),
            idem: keep_vertices.iter().map(|&v| reindex[&self.idem[v]]).collect(),
            relations: Vec::new(),
            mul,
            prepend,
        }
    }

    /// Structural identity of multiplication tables under a basis bijection
    /// given as `map[self_index] = other_index`.
    pub fn structure_constants_equal(&self, other: &FiniteDimAlgebra, map: &[usize]) -> bool {
        if self.dim() != other.dim() || map.len() != self.dim() {
            return false;
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let ours = &self.mul[i][j];
                let theirs = &other.mul[map[i]][map[j]];
                for (t, c) in ours.iter().enumerate() {
                    if *c != theirs[map[t]] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Match bases of two algebras by (source name, target name, arrow-name
    /// sequence). Returns `map[self_index] = other_index` when total.
    pub fn label_bijection(&self, other: &FiniteDimAlgebra) -> Option<Vec<usize>> {
        if self.dim() != other.dim() {
            return None;
        }
        let key = |alg: &FiniteDimAlgebra, i: usize| -> (String, String, Vec<String>) {
            let b = &alg.basis[i];
            (
                alg.vertex_names[b.src].clone(),
                alg.vertex_names[b.tgt].clone(),
                b.arrows.iter().map(|&a| alg.arrow_names[a].clone()).collect(),
            )
        };
        let mut other_by_key = BTreeMap::new();
        for i in 0..other.dim() {
            other_by_key.insert(key(other, i), i);
        }
        let mut map = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            map.push(*other_by_key.get(&key(self, i))?);
        }
        Some(map)
    }

    /// Resolve a trace functional given as values on representative paths.
    /// Each listed path must reduce to a scalar multiple of a single basis
    /// element; unlisted basis elements get zero.
    pub fn trace_from_entries(
        &self,
        entries: &[(Scalar, Vec<usize>)],
    ) -> Result<Vec<Scalar>, AlgebraError> {
        let mut lambda = vec_ops::zeros(self.field, self.dim());
        for (value, path) in entries {
            let v = if path.is_empty() {
                if self.vertex_names.len() != 1 {
                    return Err(AlgebraError::AmbiguousEmptyPath(self.vertex_names.len()));
                }
                self.idem_vec(0)
            } else {
                self.reduce_path(path)
            };
            let nonzero: Vec<usize> = (0..self.dim()).filter(|&i| !v[i].is_zero()).collect();
            let label = path
                .iter()
                .map(|&a| self.arrow_names[a].clone())
                .collect::<Vec<_>>()
                .join("*");
            match nonzero.len() {
                1 => {
                    let i = nonzero[0];
                    lambda[i] = value.div(&v[i]).expect("nonzero coefficient");
                }
                _ => return Err(AlgebraError::TraceEntryNotMonomial(label)),
            }
        }
        Ok(lambda)
    }
}

struct PathEnum {
    /// All composable paths up to the cap, keyed by arrow sequence.
    paths: Vec<(Vec<usize>, usize, usize)>, // (arrows, src, tgt)
    index: BTreeMap<Vec<usize>, usize>,
}

const MAX_PATHS: usize = 200_000;

fn enumerate_paths(
    n_vertices: usize,
    arrows: &[ArrowData],
    cap: u32,
) -> Result<PathEnum, AlgebraError> {
    let mut paths: Vec<(Vec<usize>, usize, usize)> = Vec::new();
    let mut index = BTreeMap::new();
    for v in 0..n_vertices {
        index.insert(Vec::new(), usize::MAX); // placeholder, fixed below
        let _ = v;
    }
    index.clear();
    // Length-0 paths are the vertices; we key them by a sentinel sequence
    // [usize::MAX - v] to keep keys unique, but store them first.
    let mut frontier: Vec<usize> = Vec::new();
    for v in 0..n_vertices {
        paths.push((Vec::new(), v, v));
        frontier.push(paths.len() - 1);
    }
    for _len in 1..=cap {
        let mut next = Vec::new();
        for &pi in &frontier {
            let (p, src, tgt) = paths[pi].clone();
            for (ai, a) in arrows.iter().enumerate() {
                if a.src == tgt {
                    let mut q = p.clone();
                    q.push(ai);
                    paths.push((q.clone(), src, a.tgt));
                    index.insert(q, paths.len() - 1);
                    next.push(paths.len() - 1);
                    if paths.len() > MAX_PATHS {
                        return Err(AlgebraError::TooManyPaths(MAX_PATHS));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(PathEnum { paths, index })
}

/// Build the quotient path algebra from a validated presentation.
///
/// For each length up to the cap, the span of paths of that length is cut by
/// the subspace generated by relations padded with paths on both sides; the
/// construction stops at the first length that contributes no new basis
/// element. Longer paths then reduce recursively through the arrow tables.
pub fn compute_basis(p: &ValidatedPresentation) -> Result<FiniteDimAlgebra, AlgebraError> {
    let field = p.field;
    let cap = p.degree_cap;
    let nv = p.vertex_names.len();
    let pe = enumerate_paths(nv, &p.arrows, cap)?;
    let np = pe.paths.len();

    // Column order: longer paths first so that elimination keeps the shortest
    // representative of every class; lexicographic within a length.
    let mut col_order: Vec<usize> = (0..np).collect();
    col_order.sort_by(|&a, &b| {
        let (pa, sa, _) = &pe.paths[a];
        let (pb, sb, _) = &pe.paths[b];
        pb.len().cmp(&pa.len()).then(pa.cmp(pb)).then(sa.cmp(sb))
    });
    let col_of: BTreeMap<usize, usize> =
        col_order.iter().enumerate().map(|(c, &p)| (p, c)).collect();

    // Relation rows: u * r * v for all composable path paddings within cap.
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for rel in &p.relations {
        let max_term = rel.terms.iter().map(|(_, rp)| rp.arrows.len()).max().unwrap_or(0);
        if max_term > cap as usize {
            return Err(AlgebraError::RelationBeyondCap { len: max_term, cap });
        }
        let rel_src = rel.terms[0].1.src.expect("relation terms are nonempty paths");
        let rel_tgt = rel.terms[0].1.tgt.expect("relation terms are nonempty paths");
        for (u, usrc, utgt) in &pe.paths {
            if *utgt != rel_src {
                continue;
            }
            let _ = usrc;
            for (v, vsrc, _) in &pe.paths {
                if *vsrc != rel_tgt {
                    continue;
                }
                if u.len() + max_term + v.len() > cap as usize {
                    continue;
                }
                let mut row = vec_ops::zeros(field, np);
                let mut ok = true;
                for (c, rp) in &rel.terms {
                    let mut whole = u.clone();
                    whole.extend_from_slice(&rp.arrows);
                    whole.extend_from_slice(v);
                    match pe.index.get(&whole) {
                        Some(&pi) => row[pi] = row[pi].add(c),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok && !vec_ops::is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }

    // Echelonize in the chosen column order.
    let permuted: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| col_order.iter().map(|&pi| r[pi].clone()).collect())
        .collect();
    let (red, pivots) = if permuted.is_empty() {
        (Mat::zeros(field, 0, np), Vec::new())
    } else {
        rref(&Mat::from_rows(field, permuted))
    };
    let pivot_row_of_col: BTreeMap<usize, usize> =
        pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();

    // Non-pivot paths per length; stabilization check.
    let is_pivot = |pi: usize| pivot_row_of_col.contains_key(&col_of[&pi]);
    let mut count_by_len = vec![0usize; cap as usize + 1];
    for pi in 0..np {
        if !is_pivot(pi) {
            count_by_len[pe.paths[pi].0.len()] += 1;
        }
    }
    let mut stable_at = None;
    for (len, &c) in count_by_len.iter().enumerate() {
        if len >= 1 && c == 0 {
            stable_at = Some(len);
            break;
        }
    }
    // A quiver with no arrows at all stabilizes at length 1 even though no
    // length-1 paths exist.
    let max_len_enumerated = pe.paths.iter().map(|(p, _, _)| p.len()).max().unwrap_or(0);
    if stable_at.is_none() && max_len_enumerated < cap as usize {
        stable_at = Some(max_len_enumerated + 1);
    }
    let Some(stable_at) = stable_at else {
        return Err(AlgebraError::DimensionNotStabilized { cap });
    };
    for (len, &c) in count_by_len.iter().enumerate() {
        if len > stable_at && c != 0 {
            return Err(AlgebraError::DimensionNotStabilized { cap });
        }
    }

    // Basis = non-pivot paths below the stable length, in display order.
    let mut basis_paths: Vec<usize> =
        (0..np).filter(|&pi| !is_pivot(pi) && pe.paths[pi].0.len() < stable_at).collect();
    basis_paths.sort_by(|&a, &b| {
        let (pa, sa, ta) = &pe.paths[a];
        let (pb, sb, tb) = &pe.paths[b];
        pa.len().cmp(&pb.len()).then(sa.cmp(sb)).then(ta.cmp(tb)).then(pa.cmp(pb))
    });
    let basis_index_of_path: BTreeMap<usize, usize> =
        basis_paths.iter().enumerate().map(|(bi, &pi)| (pi, bi)).collect();
    let dim = basis_paths.len();

    // Reduction of any enumerated path to basis coordinates.
    let reduce_enumerated = |pi: usize| -> Vec<Scalar> {
        let mut out = vec_ops::zeros(field, dim);
        if let Some(&bi) = basis_index_of_path.get(&pi) {
            out[bi] = field.one();
            return out;
        }
        let col = col_of[&pi];
        if let Some(&row) = pivot_row_of_col.get(&col) {
            // pivot path = -sum over non-pivot columns of the row entries
            for c in 0..np {
                if c == col {
                    continue;
                }
                let coeff = red.at(row, c);
                if coeff.is_zero() {
                    continue;
                }
                let path_id = col_order[c];
                if let Some(&bi) = basis_index_of_path.get(&path_id) {
                    out[bi] = out[bi].sub(coeff);
                }
                // Entries on pivot columns are zero in RREF; entries on
                // non-pivot paths at or beyond the stable length vanish.
            }
        }
        out
    };

    let degree_of_path = |arrows_seq: &[usize]| -> u32 {
        arrows_seq.iter().map(|&a| p.arrows[a].degree).sum()
    };

    let basis: Vec<BasisPath> = basis_paths
        .iter()
        .map(|&pi| {
            let (arrows_seq, src, tgt) = &pe.paths[pi];
            let label = if arrows_seq.is_empty() {
                format!("e_{}", p.vertex_names[*src])
            } else {
                arrows_seq.iter().map(|&a| p.arrow_names[a].clone()).collect::<Vec<_>>().join("*")
            };
            BasisPath {
                arrows: arrows_seq.clone(),
                src: *src,
                tgt: *tgt,
                len: arrows_seq.len() as u32,
                degree: degree_of_path(arrows_seq),
                label,
            }
        })
        .collect();

    let mut idem = Vec::new();
    for v in 0..nv {
        let found = basis
            .iter()
            .position(|b| b.arrows.is_empty() && b.src == v)
            .ok_or_else(|| AlgebraError::VertexCollapsed(p.vertex_names[v].clone()))?;
        idem.push(found);
    }

    // prepend[a][b]: reduce (arrow a) * (representative of b).
    let mut prepend = Vec::new();
    for (ai, a) in p.arrows.iter().enumerate() {
        let mut per = Vec::new();
        for b in &basis {
            if a.tgt != b.src {
                per.push(vec_ops::zeros(field, dim));
                continue;
            }
            let mut whole = vec![ai];
            whole.extend_from_slice(&b.arrows);
            let v = match pe.index.get(&whole) {
                Some(&pi) => reduce_enumerated(pi),
                None => vec_ops::zeros(field, dim), // beyond cap: past the stable length
            };
            per.push(v);
        }
        prepend.push(per);
    }

    // Structure constants by folding prepends.
    let mut mul = vec![vec![vec_ops::zeros(field, dim); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            if basis[i].tgt != basis[j].src {
                continue;
            }
            let mut v = vec_ops::zeros(field, dim);
            v[j] = field.one();
            for &a in basis[i].arrows.iter().rev() {
                let mut out = vec_ops::zeros(field, dim);
                for (t, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        vec_ops::axpy(&mut out, c, &prepend[a][t]);
                    }
                }
                v = out;
            }
            mul[i][j] = v;
        }
    }

    let alg = FiniteDimAlgebra {
        field,
        vertex_names: p.vertex_names.clone(),
        vertex_tilded: vec![false; nv],
        arrows: p.arrows.clone(),
        arrow_names: p.arrow_names.clone(),
        basis,
        idem,
        relations: p.relations.clone(),
        mul,
        prepend,
    };

    // Unit and block sanity.
    let unit = alg.unit_vec();
    for i in 0..alg.dim() {
        let b = alg.basis_vec(i);
        if alg.product_vec(&unit, &b) != b || alg.product_vec(&b, &unit) != b {
            return Err(AlgebraError::NonSplitSimple {
                detail: format!("vertex idempotent sum is not a unit on {}", alg.basis[i].label),
            });
        }
    }
    if alg.dim() <= 50 {
        if let Err((i, j, k)) = alg.check_associativity_exhaustive() {
            return Err(AlgebraError::NonSplitSimple {
                detail: format!(
                    "structure constants fail associativity on triple ({}, {}, {})",
                    alg.basis[i].label, alg.basis[j].label, alg.basis[k].label
                ),
            });
        }
    }
    split_top_check(&alg)?;
    Ok(alg)
}

/// The semisimple quotient by the arrow ideal must be spanned by the vertex
/// idempotents; anything else signals a non-split simple over the chosen
/// field (or a collapsed presentation).
fn split_top_check(alg: &FiniteDimAlgebra) -> Result<(), AlgebraError> {
    let arrow_gens: Vec<Vec<Scalar>> = (0..alg.dim())
        .filter(|&i| alg.basis[i].len >= 1)
        .map(|i| alg.basis_vec(i))
        .collect();
    let ideal = alg.ideal_closure(&arrow_gens);
    let top_dim = alg.dim() - ideal.dim();
    let mut vertex_span = ideal.clone();
    let mut independent = 0;
    for x in 0..alg.vertex_names.len() {
        if vertex_span.add_vector(&alg.idem_vec(x)) {
            independent += 1;
        }
    }
    if independent != top_dim {
        return Err(AlgebraError::NonSplitSimple {
            detail: format!(
                "semisimple top has dimension {top_dim} but vertex classes span {independent}"
            ),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::fixtures;

    fn build(p: crate::presentation::AlgebraPresentation) -> FiniteDimAlgebra {
        compute_basis(&p.validate().unwrap()).unwrap()
    }

    #[test]
    fn a2_basis_has_three_elements() {
        let a = build(fixtures::a2());
        assert_eq!(a.dim(), 3);
        let labels: Vec<&str> = a.basis.iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, vec!["e_1", "e_2", "a"]);
    }

    #[test]
    fn k_is_one_dimensional() {
        let a = build(fixtures::k());
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn dual_numbers_kill_higher_powers() {
        let a = build(fixtures::d());
        assert_eq!(a.dim(), 2);
        let x = a.basis_vec(1);
        assert!(vec_ops::is_zero(&a.product_vec(&x, &x)));
    }

    #[test]
    fn n3_has_dimension_three() {
        let a = build(fixtures::n3());
        assert_eq!(a.dim(), 3);
        let x = a.basis_vec(1);
        let x2 = a.product_vec(&x, &x);
        assert_eq!(x2, a.basis_vec(2));
        assert!(vec_ops::is_zero(&a.product_vec(&x2, &x)));
    }

    #[test]
    fn free_loop_fails_to_stabilize() {
        let p = fixtures::infinite().validate().unwrap();
        assert!(matches!(compute_basis(&p), Err(AlgebraError::DimensionNotStabilized { .. })));
    }

    #[test]
    fn diagram_order_products() {
        // a = e_1 * a * e_2 under traversal-order multiplication
        let alg = build(fixtures::a2());
        let a = alg.basis_vec(2);
        let e1 = alg.idem_vec(0);
        let e2 = alg.idem_vec(1);
        assert_eq!(alg.product_vec(&e1, &a), a);
        assert_eq!(alg.product_vec(&a, &e2), a);
        assert!(vec_ops::is_zero(&alg.product_vec(&a, &e1)));
        assert!(vec_ops::is_zero(&alg.product_vec(&e2, &a)));
    }

    #[test]
    fn corner_and_quotient_on_a2() {
        let alg = build(fixtures::a2());
        // corner on vertex 2 is the one-dimensional algebra
        let corner = alg.corner_on_vertices(&[1]);
        assert_eq!(corner.dim(), 1);
        // killing vertex 2 removes e_2 and the arrow
        let q = alg.idempotent_quotient(&[1]).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.vertex_names, vec!["1".to_string()]);
    }

    #[test]
    fn trace_entries_resolve() {
        let alg = build(fixtures::d());
        let vp = fixtures::d().validate().unwrap();
        let entries: Vec<(Scalar, Vec<usize>)> = vp
            .trace
            .unwrap()
            .into_iter()
            .map(|(v, rp)| (v, rp.arrows))
            .collect();
        let lambda = alg.trace_from_entries(&entries).unwrap();
        assert!(lambda[0].is_zero());
        assert!(lambda[1].is_one());
    }
}
