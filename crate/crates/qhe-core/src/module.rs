//! Modules over a windowed category.
//!
//! A module assigns a space to every object and a matrix to every hom-basis
//! vector, covariantly: f in hom(u, v) acts M(u) -> M(v). Right modules are
//! covariant modules over the opposite category, and duality swaps the two
//! by transposing all action matrices.

use crate::envelope::{Category, Opposite};
use crate::linalg::{invert, kernel_basis, Mat, Subspace};
use crate::scalar::{vec_ops, Scalar};
use std::collections::BTreeMap;

/// A finitely supported module: per-object dimensions plus one action matrix
/// per hom-basis vector on every slot where both ends are nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleRep {
    pub dims: Vec<usize>,
    /// action[(u, v)][t]: matrix of the t-th hom-basis vector, M(u) -> M(v).
    pub action: BTreeMap<(usize, usize), Vec<Mat>>,
}

impl ModuleRep {
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.dims.len()).filter(|&v| self.dims[v] > 0).collect()
    }

    /// Matrix of an arbitrary hom element given by coordinates.
    pub fn act(&self, field: crate::scalar::FieldSpec, u: usize, v: usize, coords: &[Scalar]) -> Mat {
        let mut m = Mat::zeros(field, self.dims[v], self.dims[u]);
        if let Some(mats) = self.action.get(&(u, v)) {
            for (t, c) in coords.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for r in 0..m.rows {
                    for s in 0..m.cols {
                        let add = c.mul(mats[t].at(r, s));
                        if !add.is_zero() {
                            let cur = m.at(r, s).add(&add);
                            *m.at_mut(r, s) = cur;
                        }
                    }
                }
            }
        }
        m
    }
}

/// The covariant projective at an object: spaces hom(o, v), morphisms acting
/// by post-composition.
pub fn projective<C: Category + ?Sized>(cat: &C, o: usize) -> ModuleRep {
    let n = cat.objects().len();
    let field = cat.field();
    let dims: Vec<usize> = (0..n).map(|v| cat.hom_dim(o, v)).collect();
    let mut action = BTreeMap::new();
    for u in 0..n {
        if dims[u] == 0 {
            continue;
        }
        for v in 0..n {
            let hd = cat.hom_dim(u, v);
            if hd == 0 || dims[v] == 0 {
                continue;
            }
            let mut mats = Vec::with_capacity(hd);
            for t in 0..hd {
                let mut g = vec_ops::zeros(field, hd);
                g[t] = field.one();
                let mut m = Mat::zeros(field, dims[v], dims[u]);
                for s in 0..dims[u] {
                    let mut f = vec_ops::zeros(field, dims[u]);
                    f[s] = field.one();
                    let img = cat.compose(o, u, v, &f, &g);
                    for (r, c) in img.iter().enumerate() {
                        *m.at_mut(r, s) = c.clone();
                    }
                }
                mats.push(m);
            }
            action.insert((u, v), mats);
        }
    }
    ModuleRep { dims, action }
}

/// The simple module at an object: one-dimensional there, zero elsewhere;
/// an endomorphism acts by its coefficient along the unit modulo the radical.
pub fn simple<C: Category + ?Sized>(cat: &C, o: usize) -> ModuleRep {
    let n = cat.objects().len();
    let field = cat.field();
    let mut dims = vec![0usize; n];
    dims[o] = 1;
    let mut action = BTreeMap::new();
    let hd = cat.hom_dim(o, o);
    if hd > 0 {
        // express each basis vector as c * unit + radical
        let e = cat.unit(o);
        let rad = cat.radical_vectors(o, o);
        let mut cols = vec![e];
        cols.extend(rad);
        let mut m = Mat::zeros(field, hd, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..hd {
                *m.at_mut(i, j) = col[i].clone();
            }
        }
        let mut mats = Vec::with_capacity(hd);
        for t in 0..hd {
            let mut b = vec_ops::zeros(field, hd);
            b[t] = field.one();
            let sol = crate::linalg::solve(&m, &b)
                .expect("dimensions agree")
                .expect("unit and radical span the endomorphism slot");
            let mut mat = Mat::zeros(field, 1, 1);
            *mat.at_mut(0, 0) = sol[0].clone();
            mats.push(mat);
        }
        action.insert((o, o), mats);
    }
    ModuleRep { dims, action }
}

/// Per-object radical subspaces: sums of images of all radical morphisms.
pub fn radical_subspaces<C: Category + ?Sized>(cat: &C, m: &ModuleRep) -> Vec<Subspace> {
    let n = cat.objects().len();
    let field = cat.field();
    let mut out: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
    for (&(u, v), _) in &m.action {
        for r in cat.radical_vectors(u, v) {
            let mat = m.act(field, u, v, &r);
            for s in 0..mat.cols {
                let col = mat.col(s);
                if !vec_ops::is_zero(&col) {
                    out[v].push(col);
                }
            }
        }
    }
    (0..n).map(|v| Subspace::from_vectors(field, m.dims[v], &out[v])).collect()
}

/// Close a family of per-object subspaces under every basis morphism.
pub fn submodule_closure<C: Category + ?Sized>(
    cat: &C,
    m: &ModuleRep,
    seeds: Vec<Subspace>,
) -> Vec<Subspace> {
    let field = cat.field();
    let mut subs = seeds;
    loop {
        let mut grew = false;
        for (&(u, v), mats) in &m.action {
            if subs[u].dim() == 0 {
                continue;
            }
            let vectors: Vec<Vec<Scalar>> = subs[u].basis().to_vec();
            for mat in mats {
                for w in &vectors {
                    let img = mat.mul_vec(w);
                    if !vec_ops::is_zero(&img) && subs[v].add_vector(&img) {
                        grew = true;
                    }
                }
            }
            let _ = field;
        }
        if !grew {
            return subs;
        }
    }
}

/// Quotient by a family of subspaces that is already a submodule; the new
/// basis is the canonical complement of each echelon.
pub fn quotient_module<C: Category + ?Sized>(
    cat: &C,
    m: &ModuleRep,
    subs: &[Subspace],
) -> ModuleRep {
    let field = cat.field();
    let n = m.dims.len();
    let dims: Vec<usize> = (0..n).map(|v| m.dims[v] - subs[v].dim()).collect();
    let mut action = BTreeMap::new();
    for (&(u, v), mats) in &m.action {
        if dims[u] == 0 || dims[v] == 0 {
            continue;
        }
        let comp_u = subs[u].complement_coords();
        let mut new_mats = Vec::with_capacity(mats.len());
        for mat in mats {
            let mut nm = Mat::zeros(field, dims[v], dims[u]);
            for (j, &cu) in comp_u.iter().enumerate() {
                // representative of the j-th quotient basis vector
                let mut rep = vec_ops::zeros(field, m.dims[u]);
                rep[cu] = field.one();
                let img = mat.mul_vec(&rep);
                let q = subs[v].quotient_coords(&img);
                for (i, c) in q.iter().enumerate() {
                    *nm.at_mut(i, j) = c.clone();
                }
            }
            new_mats.push(nm);
        }
        action.insert((u, v), new_mats);
    }
    ModuleRep { dims, action }
}

/// Restrict to a family of subspaces that is already a submodule.
pub fn submodule<C: Category + ?Sized>(cat: &C, m: &ModuleRep, subs: &[Subspace]) -> ModuleRep {
    let field = cat.field();
    let n = m.dims.len();
    let dims: Vec<usize> = (0..n).map(|v| subs[v].dim()).collect();
    let mut action = BTreeMap::new();
    for (&(u, v), mats) in &m.action {
        if dims[u] == 0 || dims[v] == 0 {
            continue;
        }
        let mut new_mats = Vec::with_capacity(mats.len());
        for mat in mats {
            let mut nm = Mat::zeros(field, dims[v], dims[u]);
            for (j, w) in subs[u].basis().iter().enumerate() {
                let img = mat.mul_vec(w);
                let c = subs[v]
                    .coords_of(&img)
                    .expect("family is closed under the action");
                for (i, x) in c.iter().enumerate() {
                    *nm.at_mut(i, j) = x.clone();
                }
            }
            new_mats.push(nm);
        }
        action.insert((u, v), new_mats);
    }
    ModuleRep { dims, action }
}

/// The dual module over the opposite category: same dimensions, transposed
/// actions.
pub fn dual<C: Category + ?Sized>(cat: &C, m: &ModuleRep) -> ModuleRep {
    let mut action = BTreeMap::new();
    for (&(u, v), mats) in &m.action {
        // over the opposite, the slot (v, u) has the same hom basis
        action.insert((v, u), mats.iter().map(Mat::transpose).collect());
    }
    let _ = cat;
    ModuleRep { dims: m.dims.clone(), action }
}

/// Semisimple top: per-object multiplicities of M / rad M.
pub fn top_constituents<C: Category + ?Sized>(cat: &C, m: &ModuleRep) -> Vec<(usize, usize)> {
    let rad = radical_subspaces(cat, m);
    (0..m.dims.len())
        .filter_map(|v| {
            let d = m.dims[v] - rad[v].dim();
            (d > 0).then_some((v, d))
        })
        .collect()
}

/// Radical layering: per layer, the per-object multiplicities of the
/// semisimple subquotient.
pub fn composition_series<C: Category + ?Sized>(cat: &C, m: &ModuleRep) -> Vec<Vec<(usize, usize)>> {
    let mut layers = Vec::new();
    let mut current = m.clone();
    while !current.is_zero() {
        let rad = radical_subspaces(cat, &current);
        let layer: Vec<(usize, usize)> = (0..current.dims.len())
            .filter_map(|v| {
                let d = current.dims[v] - rad[v].dim();
                (d > 0).then_some((v, d))
            })
            .collect();
        layers.push(layer);
        current = submodule(cat, &current, &rad);
    }
    layers
}

/// Per-object socle: the largest subspaces killed by every radical morphism.
pub fn socle_subspaces<C: Category + ?Sized>(cat: &C, m: &ModuleRep) -> Vec<Subspace> {
    let field = cat.field();
    let n = m.dims.len();
    let mut out = Vec::with_capacity(n);
    for u in 0..n {
        if m.dims[u] == 0 {
            out.push(Subspace::empty(field, 0));
            continue;
        }
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for v in 0..n {
            if m.action.contains_key(&(u, v)) {
                for r in cat.radical_vectors(u, v) {
                    let mat = m.act(field, u, v, &r);
                    rows.extend(mat.row_vecs());
                }
            }
        }
        let sub = if rows.is_empty() {
            Subspace::full(field, m.dims[u])
        } else {
            Subspace::from_vectors(
                field,
                m.dims[u],
                &kernel_basis(&Mat::from_rows(field, rows)),
            )
        };
        out.push(sub);
    }
    out
}

/// Basis of the space of module homomorphisms M -> N, each returned as one
/// matrix per object.
pub fn hom_space<C: Category + ?Sized>(cat: &C, m: &ModuleRep, n: &ModuleRep) -> Vec<Vec<Mat>> {
    let field = cat.field();
    let nobj = m.dims.len();
    // variable layout: per object v, an n.dims[v] x m.dims[v] block
    let mut offsets = vec![0usize; nobj + 1];
    for v in 0..nobj {
        offsets[v + 1] = offsets[v] + n.dims[v] * m.dims[v];
    }
    let nvars = offsets[nobj];
    if nvars == 0 {
        return Vec::new();
    }
    let var = |v: usize, i: usize, j: usize, mdims: &[usize]| offsets[v] + i * mdims[v] + j;

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let slots: Vec<(usize, usize)> = m
        .action
        .keys()
        .chain(n.action.keys())
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    for (u, v) in slots {
        let hd = cat.hom_dim(u, v);
        if hd == 0 {
            continue;
        }
        for t in 0..hd {
            let a = m
                .action
                .get(&(u, v))
                .map(|mats| mats[t].clone())
                .unwrap_or_else(|| Mat::zeros(field, m.dims[v], m.dims[u]));
            let b = n
                .action
                .get(&(u, v))
                .map(|mats| mats[t].clone())
                .unwrap_or_else(|| Mat::zeros(field, n.dims[v], n.dims[u]));
            // X_v A - B X_u = 0, entrywise over (i, j)
            for i in 0..n.dims[v] {
                for j in 0..m.dims[u] {
                    let mut row = vec_ops::zeros(field, nvars);
                    for k in 0..m.dims[v] {
                        if !a.at(k, j).is_zero() {
                            let idx = var(v, i, k, &m.dims);
                            row[idx] = row[idx].add(a.at(k, j));
                        }
                    }
                    for k in 0..n.dims[u] {
                        if !b.at(i, k).is_zero() {
                            let idx = var(u, k, j, &m.dims);
                            row[idx] = row[idx].sub(b.at(i, k));
                        }
                    }
                    if !vec_ops::is_zero(&row) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let ker = if rows.is_empty() {
        Mat::identity(field, nvars).row_vecs()
    } else {
        kernel_basis(&Mat::from_rows(field, rows))
    };
    ker.into_iter()
        .map(|sol| {
            (0..nobj)
                .map(|v| {
                    let mut x = Mat::zeros(field, n.dims[v], m.dims[v]);
                    for i in 0..n.dims[v] {
                        for j in 0..m.dims[v] {
                            *x.at_mut(i, j) = sol[var(v, i, j, &m.dims)].clone();
                        }
                    }
                    x
                })
                .collect()
        })
        .collect()
}

/// A module map is surjective iff each per-object matrix has full row rank.
pub fn map_is_surjective(maps: &[Mat], target: &ModuleRep) -> bool {
    maps.iter()
        .enumerate()
        .all(|(v, x)| crate::linalg::rank(x) == target.dims[v])
}

/// Kernel of a module map, as per-object subspaces (automatically a
/// submodule).
pub fn map_kernel(field: crate::scalar::FieldSpec, maps: &[Mat], source: &ModuleRep) -> Vec<Subspace> {
    maps.iter()
        .enumerate()
        .map(|(v, x)| {
            if source.dims[v] == 0 {
                Subspace::empty(field, 0)
            } else if x.rows == 0 {
                Subspace::full(field, source.dims[v])
            } else {
                Subspace::from_vectors(field, source.dims[v], &kernel_basis(x))
            }
        })
        .collect()
}

/// Search for an isomorphism: try each hom-basis element, then small integer
/// combinations. Returns per-object invertible matrices.
pub fn find_isomorphism<C: Category + ?Sized>(
    cat: &C,
    m: &ModuleRep,
    n: &ModuleRep,
) -> Option<Vec<Mat>> {
    if m.dims != n.dims {
        return None;
    }
    if m.is_zero() {
        return Some(Vec::new());
    }
    let field = cat.field();
    let homs = hom_space(cat, m, n);
    let invertible = |maps: &[Mat]| -> bool {
        maps.iter().enumerate().all(|(v, x)| {
            if m.dims[v] == 0 {
                true
            } else {
                x.rows == x.cols && invert(x).is_some()
            }
        })
    };
    for h in &homs {
        if invertible(h) {
            return Some(h.clone());
        }
    }
    // deterministic small combinations
    if homs.len() >= 2 {
        let nobj = m.dims.len();
        for c1 in 1..=3i64 {
            for pair in homs.windows(2) {
                let combo: Vec<Mat> = (0..nobj)
                    .map(|v| {
                        let mut x = pair[0][v].clone();
                        for i in 0..x.rows {
                            for j in 0..x.cols {
                                let add = field.from_i64(c1).mul(pair[1][v].at(i, j));
                                let cur = x.at(i, j).add(&add);
                                *x.at_mut(i, j) = cur;
                            }
                        }
                        x
                    })
                    .collect();
                if invertible(&combo) {
                    return Some(combo);
                }
            }
        }
    }
    None
}

/// Verify that per-object matrices intertwine the two actions exactly.
pub fn verify_intertwiner<C: Category + ?Sized>(
    cat: &C,
    m: &ModuleRep,
    n: &ModuleRep,
    maps: &[Mat],
) -> bool {
    let field = cat.field();
    let slots: std::collections::BTreeSet<(usize, usize)> =
        m.action.keys().chain(n.action.keys()).copied().collect();
    for (u, v) in slots {
        let hd = cat.hom_dim(u, v);
        for t in 0..hd {
            let mut coords = vec_ops::zeros(field, hd);
            coords[t] = field.one();
            let a = m.act(field, u, v, &coords);
            let b = n.act(field, u, v, &coords);
            let left = maps[v].mul_mat(&a);
            let right = b.mul_mat(&maps[u]);
            if left != right {
                return false;
            }
        }
    }
    true
}

/// Dimension vector over a level range, for display and tests.
pub fn dim_vector<C: Category + ?Sized>(cat: &C, m: &ModuleRep) -> BTreeMap<(i64, usize), usize> {
    let mut out = BTreeMap::new();
    for (v, &d) in m.dims.iter().enumerate() {
        if d > 0 {
            let o = &cat.objects()[v];
            out.insert((o.level, o.vertex), d);
        }
    }
    out
}

/// Right modules: covariant modules over the opposite category.
pub fn right_projective<C: Category + ?Sized>(cat: &C, o: usize) -> ModuleRep {
    projective(&Opposite(cat), o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::test_support::envelope_of;
    use crate::envelope::Category;
    use crate::presentation::fixtures;

    #[test]
    fn projective_of_dual_numbers_envelope() {
        let c = envelope_of(fixtures::d(), 4);
        let o = c.object_id(0, 0).unwrap();
        let p = projective(&c, o);
        assert_eq!(p.total_dim(), 4);
        // dimension vector (1, 2, 1) over levels -1, 0, 1
        let dv = dim_vector(&c, &p);
        assert_eq!(dv.get(&(-1, 0)), Some(&1));
        assert_eq!(dv.get(&(0, 0)), Some(&2));
        assert_eq!(dv.get(&(1, 0)), Some(&1));
    }

    #[test]
    fn right_projective_of_dual_numbers_envelope() {
        let c = envelope_of(fixtures::d(), 4);
        let o = c.object_id(0, 0).unwrap();
        let p = right_projective(&c, o);
        let dv = dim_vector(&c, &p);
        assert_eq!(dv.get(&(-1, 0)), Some(&1));
        assert_eq!(dv.get(&(0, 0)), Some(&2));
        assert_eq!(dv.get(&(1, 0)), Some(&1));
    }

    #[test]
    fn projective_of_semisimple_envelope_is_simple() {
        let c = envelope_of(fixtures::k(), 2);
        let o = c.object_id(0, 0).unwrap();
        let p = projective(&c, o);
        assert_eq!(p.total_dim(), 1);
        let s = simple(&c, o);
        assert_eq!(p, s);
    }

    #[test]
    fn radical_and_top_of_projective() {
        let c = envelope_of(fixtures::d(), 4);
        let o = c.object_id(0, 0).unwrap();
        let p = projective(&c, o);
        let tops = top_constituents(&c, &p);
        assert_eq!(tops, vec![(o, 1)]);
        let series = composition_series(&c, &p);
        assert_eq!(series.len(), 3);
        assert_eq!(series[0], vec![(o, 1)]);
        // middle layer has the two neighbors
        assert_eq!(series[1].iter().map(|&(_, d)| d).sum::<usize>(), 2);
        assert_eq!(series[2], vec![(o, 1)]);
    }

    #[test]
    fn dual_of_projective_is_injective_over_op() {
        let c = envelope_of(fixtures::d(), 4);
        let o = c.object_id(0, 0).unwrap();
        let p = projective(&c, o);
        let d = dual(&c, &p);
        let op = crate::envelope::Opposite(&c);
        // socle of the dual = top of the original
        let soc = socle_subspaces(&op, &d);
        let total: usize = soc.iter().map(Subspace::dim).sum();
        assert_eq!(total, 1);
        assert_eq!(soc[o].dim(), 1);
    }

    #[test]
    fn hom_between_projectives_matches_opposite_hom() {
        // Hom(P(u), P(v)) has dimension hom(v, u)
        let c = envelope_of(fixtures::a2(), 4);
        let u = c.object_id(0, 0).unwrap();
        let v = c.object_id(1, 1).unwrap();
        let pu = projective(&c, u);
        let pv = projective(&c, v);
        let h = hom_space(&c, &pu, &pv);
        assert_eq!(h.len(), c.hom_dim(v, u));
        let h2 = hom_space(&c, &pv, &pu);
        assert_eq!(h2.len(), c.hom_dim(u, v));
    }

    #[test]
    fn identity_is_found_as_isomorphism() {
        let c = envelope_of(fixtures::d(), 4);
        let o = c.object_id(0, 0).unwrap();
        let p = projective(&c, o);
        let maps = find_isomorphism(&c, &p, &p).expect("projective is isomorphic to itself");
        assert!(verify_intertwiner(&c, &p, &p, &maps));
    }
}
