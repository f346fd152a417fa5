//! Two-sided ideal filtrations with semisimple layers, the adapted bases the
//! envelope construction is built on, and Loewy/socle data.
//!
//! A filtration is a strictly descending chain `A = I_0 > I_1 > ... > I_N = 0`
//! of two-sided ideals with `I_i I_j <= I_{i+j}`. The automatic choice is the
//! radical filtration (arrow-ideal powers), available for admissible
//! relations; arbitrary chains can be supplied and are validated.

use crate::algebra::FiniteDimAlgebra;
use crate::linalg::{invert, Mat, Subspace};
use crate::scalar::{vec_ops, Scalar};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FiltrationError {
    #[error("relation {index} involves a path of length {len} < 2; radical filtration needs admissible relations")]
    NonAdmissibleRelations { index: usize, len: usize },
    #[error("relation {index} mixes degrees {d1} and {d2}; grading filtration needs homogeneous relations")]
    NotGraded { index: usize, d1: u32, d2: u32 },
    #[error("layer {layer} is not a two-sided ideal (violated on the {side} side)")]
    NotAnIdeal { layer: usize, side: &'static str },
    #[error("layers {i} and {j} violate the product rule I_i * I_j <= I_(i+j)")]
    NotMultiplicative { i: usize, j: usize },
    #[error("layer {layer} is not semisimple as a bimodule (I_1 does not annihilate it)")]
    LayerNotSemisimple { layer: usize },
    #[error("filtration layers are not strictly descending at index {layer}")]
    NotDescending { layer: usize },
    #[error("filtration does not start at the whole algebra and end at zero")]
    BadEndpoints,
    #[error("top quotient A/I_1 is not split semisimple over the vertex idempotents: {detail}")]
    NonSplitTop { detail: String },
}

/// One vector of a filtration-adapted basis of the algebra.
#[derive(Debug, Clone)]
pub struct AdaptedVector {
    pub coords: Vec<Scalar>,
    /// Largest j with the vector inside layer j.
    pub layer: usize,
    pub src: usize,
    pub tgt: usize,
    pub label: String,
}

/// A basis of the algebra adapted to the filtration and to the vertex-block
/// decomposition: layer j is spanned by the adapted vectors of layer >= j.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    pub vectors: Vec<AdaptedVector>,
    pub block_index: BTreeMap<(usize, usize), Vec<usize>>,
    /// Expresses an algebra vector in adapted coordinates.
    to_adapted: Mat,
}

impl AdaptedBasis {
    pub fn adapted_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.to_adapted.mul_vec(v)
    }
}

#[derive(Debug, Clone)]
pub struct IdealFiltration {
    /// layers[j] = I_j, for j in 0..=N.
    pub layers: Vec<Subspace>,
    pub n: usize,
    pub adapted: AdaptedBasis,
}

impl IdealFiltration {
    pub fn layer_dims(&self) -> Vec<usize> {
        self.layers.iter().map(Subspace::dim).collect()
    }
}

/// The radical filtration by arrow-ideal powers. Requires admissible
/// relations (all terms of length >= 2); every structural condition is then
/// re-verified by explicit multiplication.
pub fn radical_filtration(alg: &FiniteDimAlgebra) -> Result<IdealFiltration, FiltrationError> {
    for (index, rel) in alg.relations.iter().enumerate() {
        for (_, rp) in &rel.terms {
            if rp.arrows.len() < 2 {
                return Err(FiltrationError::NonAdmissibleRelations { index, len: rp.arrows.len() });
            }
        }
    }
    let max_len = alg.basis.iter().map(|b| b.len).max().unwrap_or(0) as usize;
    let n = max_len + 1;
    let layers = (0..=n)
        .map(|j| {
            let vecs: Vec<Vec<Scalar>> = (0..alg.dim())
                .filter(|&i| alg.basis[i].len as usize >= j)
                .map(|i| alg.basis_vec(i))
                .collect();
            Subspace::from_vectors(alg.field, alg.dim(), &vecs)
        })
        .collect();
    validate_filtration(alg, layers)
}

/// The grading filtration `I_j = span of degree >= j`. Requires relations
/// homogeneous with respect to the arrow degrees.
pub fn grading_filtration(alg: &FiniteDimAlgebra) -> Result<IdealFiltration, FiltrationError> {
    for (index, rel) in alg.relations.iter().enumerate() {
        let degs: Vec<u32> = rel
            .terms
            .iter()
            .map(|(_, rp)| rp.arrows.iter().map(|&a| alg.arrows[a].degree).sum())
            .collect();
        for w in 1..degs.len() {
            if degs[w] != degs[0] {
                return Err(FiltrationError::NotGraded { index, d1: degs[0], d2: degs[w] });
            }
        }
    }
    let max_deg = alg.basis.iter().map(|b| b.degree).max().unwrap_or(0) as usize;
    let n = max_deg + 1;
    let layers = (0..=n)
        .map(|j| {
            let vecs: Vec<Vec<Scalar>> = (0..alg.dim())
                .filter(|&i| alg.basis[i].degree as usize >= j)
                .map(|i| alg.basis_vec(i))
                .collect();
            Subspace::from_vectors(alg.field, alg.dim(), &vecs)
        })
        .collect();
    validate_filtration(alg, layers)
}

/// Verify the full set of filtration axioms on an explicit chain of layers
/// and build the adapted basis.
pub fn validate_filtration(
    alg: &FiniteDimAlgebra,
    layers: Vec<Subspace>,
) -> Result<IdealFiltration, FiltrationError> {
    let dim = alg.dim();
    let n = layers.len().saturating_sub(1);
    if layers.is_empty() || layers[0].dim() != dim || layers[n].dim() != 0 {
        return Err(FiltrationError::BadEndpoints);
    }
    for j in 1..=n {
        if !layers[j].is_subspace_of(&layers[j - 1]) || layers[j].dim() >= layers[j - 1].dim() {
            return Err(FiltrationError::NotDescending { layer: j });
        }
    }
    // Two-sided ideal property, with the violated side reported. Side names
    // follow the hom-set notation A(x,y) = e_y * A * e_x: prepending a path
    // in traversal order multiplies on the right slot, appending on the left.
    for (j, layer) in layers.iter().enumerate().skip(1) {
        for v in layer.basis() {
            for b in 0..dim {
                if !layer.contains(&alg.product_vec(&alg.basis_vec(b), v)) {
                    return Err(FiltrationError::NotAnIdeal { layer: j, side: "right" });
                }
                if !layer.contains(&alg.product_vec(v, &alg.basis_vec(b))) {
                    return Err(FiltrationError::NotAnIdeal { layer: j, side: "left" });
                }
            }
        }
    }
    // Multiplicativity I_i I_j <= I_{i+j}; the i = 1 or j = 1 cases are the
    // bimodule semisimplicity of the layers.
    for i in 1..=n {
        for j in 1..=n {
            let k = (i + j).min(n);
            for u in layers[i].basis() {
                for v in layers[j].basis() {
                    if !layers[k].contains(&alg.product_vec(u, v)) {
                        if i == 1 || j == 1 {
                            return Err(FiltrationError::LayerNotSemisimple { layer: i.max(j) });
                        }
                        return Err(FiltrationError::NotMultiplicative { i, j });
                    }
                }
            }
        }
    }
    // Split semisimple top: the vertex classes must form a basis of A/I_1.
    let top_dim = dim - layers[1].dim();
    let mut span = layers[1].clone();
    let mut independent = 0;
    for x in 0..alg.vertex_names.len() {
        if span.add_vector(&alg.idem_vec(x)) {
            independent += 1;
        }
    }
    if independent != top_dim || top_dim != alg.vertex_names.len() {
        return Err(FiltrationError::NonSplitTop {
            detail: format!(
                "dim A/I_1 = {top_dim}, vertex classes span {independent} of it ({} vertices)",
                alg.vertex_names.len()
            ),
        });
    }
    let adapted = build_adapted(alg, &layers, n);
    Ok(IdealFiltration { layers, n, adapted })
}

/// For each vertex block, extend a basis of the deepest layer up the chain.
/// Plain path basis vectors are preferred as representatives, so monomial
/// filtrations keep their monomial basis.
fn build_adapted(alg: &FiniteDimAlgebra, layers: &[Subspace], n: usize) -> AdaptedBasis {
    let dim = alg.dim();
    let field = alg.field;
    let mut vectors: Vec<AdaptedVector> = Vec::new();
    let mut block_index: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();

    let nv = alg.vertex_names.len();
    for src in 0..nv {
        for tgt in 0..nv {
            let block = alg.vertex_block(src, tgt);
            if block.is_empty() {
                continue;
            }
            // Block restriction of each layer.
            let block_layers: Vec<Subspace> = layers
                .iter()
                .map(|l| {
                    let vecs: Vec<Vec<Scalar>> = l
                        .basis()
                        .iter()
                        .map(|v| {
                            let mut w = vec_ops::zeros(field, dim);
                            for &i in &block {
                                w[i] = v[i].clone();
                            }
                            w
                        })
                        .collect();
                    Subspace::from_vectors(field, dim, &vecs)
                })
                .collect();
            let mut chosen = Subspace::empty(field, dim);
            for j in (0..=n.saturating_sub(1)).rev() {
                // Candidates: path basis vectors inside the layer first, then
                // the layer's echelon vectors.
                let mut candidates: Vec<Vec<Scalar>> = Vec::new();
                for &i in &block {
                    let v = alg.basis_vec(i);
                    if block_layers[j].contains(&v) {
                        candidates.push(v);
                    }
                }
                candidates.extend(block_layers[j].basis().iter().cloned());
                for cand in candidates {
                    if chosen.dim() == block_layers[j].dim() {
                        break;
                    }
                    if chosen.contains(&cand) {
                        continue;
                    }
                    chosen.add_vector(&cand);
                    let monomial = cand.iter().filter(|c| !c.is_zero()).count() == 1
                        && cand.iter().any(|c| c.is_one());
                    let label = if monomial {
                        let i = cand.iter().position(|c| !c.is_zero()).unwrap();
                        alg.basis[i].label.clone()
                    } else {
                        format!("v{}", vectors.len())
                    };
                    vectors.push(AdaptedVector { coords: cand, layer: j, src, tgt, label });
                    block_index.entry((src, tgt)).or_default().push(vectors.len() - 1);
                }
            }
            debug_assert_eq!(chosen.dim(), block.len());
        }
    }
    // Sort each block by (layer, insertion) for canonical slot bases.
    for idxs in block_index.values_mut() {
        idxs.sort_by_key(|&i| (vectors[i].layer, i));
    }
    // Change of basis: columns are the adapted vectors.
    let mut m = Mat::zeros(field, dim, dim);
    for (c, av) in vectors.iter().enumerate() {
        for r in 0..dim {
            *m.at_mut(r, c) = av.coords[r].clone();
        }
    }
    let to_adapted = invert(&m).expect("adapted vectors form a basis");
    AdaptedBasis { vectors, block_index, to_adapted }
}

/// Loewy length of each left projective `A e_k` (paths into k) and right
/// projective `e_k A` (paths out of k), under the traversal-order product.
pub fn loewy_lengths(alg: &FiniteDimAlgebra, filt: &IdealFiltration) -> Vec<(usize, usize)> {
    let rad = &filt.layers[1];
    let mut out = Vec::new();
    for k in 0..alg.vertex_names.len() {
        let left_start: Vec<Vec<Scalar>> = (0..alg.dim())
            .filter(|&i| alg.basis[i].tgt == k)
            .map(|i| alg.basis_vec(i))
            .collect();
        let right_start: Vec<Vec<Scalar>> = (0..alg.dim())
            .filter(|&i| alg.basis[i].src == k)
            .map(|i| alg.basis_vec(i))
            .collect();
        let ll = |start: Vec<Vec<Scalar>>, act_left: bool| -> usize {
            let mut w = Subspace::from_vectors(alg.field, alg.dim(), &start);
            let mut m = 0;
            while w.dim() > 0 {
                let mut next: Vec<Vec<Scalar>> = Vec::new();
                for x in rad.basis() {
                    for v in w.basis() {
                        let p = if act_left {
                            alg.product_vec(x, v)
                        } else {
                            alg.product_vec(v, x)
                        };
                        if !vec_ops::is_zero(&p) {
                            next.push(p);
                        }
                    }
                }
                w = Subspace::from_vectors(alg.field, alg.dim(), &next);
                m += 1;
            }
            m
        };
        out.push((ll(left_start, true), ll(right_start, false)));
    }
    out
}

/// Powers of the radical as subspaces: pow[0] = A, pow[m+1] = I_1 * pow[m].
pub fn radical_powers(alg: &FiniteDimAlgebra, filt: &IdealFiltration) -> Vec<Subspace> {
    let rad = &filt.layers[1];
    let mut pows = vec![Subspace::full(alg.field, alg.dim())];
    loop {
        let last = pows.last().unwrap();
        if last.dim() == 0 {
            break;
        }
        let mut vecs = Vec::new();
        for x in rad.basis() {
            for v in last.basis() {
                let p = alg.product_vec(x, v);
                if !vec_ops::is_zero(&p) {
                    vecs.push(p);
                }
            }
        }
        pows.push(Subspace::from_vectors(alg.field, alg.dim(), &vecs));
    }
    pows
}

/// Ascending socle filtration of the left regular module:
/// `soc^m = { v : I_1^m v = 0 }`.
pub fn socle_filtration(alg: &FiniteDimAlgebra, filt: &IdealFiltration) -> Vec<Subspace> {
    let pows = radical_powers(alg, filt);
    let mut out = vec![Subspace::empty(alg.field, alg.dim())];
    for pow in pows.iter().skip(1) {
        // soc^m = common kernel of left multiplication by a basis of I_1^m
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for x in pow.basis() {
            let m = alg.left_mul_matrix(x);
            rows.extend(m.row_vecs());
        }
        let ker = if rows.is_empty() {
            Subspace::full(alg.field, alg.dim())
        } else {
            let mat = Mat::from_rows(alg.field, rows);
            Subspace::from_vectors(
                alg.field,
                alg.dim(),
                &crate::linalg::kernel_basis(&mat),
            )
        };
        out.push(ker);
        if out.last().unwrap().dim() == alg.dim() {
            break;
        }
    }
    out
}

/// The left regular module is rigid when its socle and radical filtrations
/// coincide as subspace chains (after re-indexing).
pub fn is_rigid(alg: &FiniteDimAlgebra, filt: &IdealFiltration) -> bool {
    let pows = radical_powers(alg, filt);
    let socs = socle_filtration(alg, filt);
    let n = pows.len() - 1; // nilpotency degree of I_1
    if socs.len() - 1 != n {
        return false;
    }
    for m in 0..=n {
        if socs[m] != pows[n - m] {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::compute_basis;
    use crate::presentation::fixtures;

    fn build(p: crate::presentation::AlgebraPresentation) -> FiniteDimAlgebra {
        compute_basis(&p.validate().unwrap()).unwrap()
    }

    #[test]
    fn radical_filtration_dims() {
        let a2 = build(fixtures::a2());
        let f = radical_filtration(&a2).unwrap();
        assert_eq!(f.layer_dims(), vec![3, 1, 0]);
        assert_eq!(f.n, 2);

        let n3 = build(fixtures::n3());
        let f = radical_filtration(&n3).unwrap();
        assert_eq!(f.layer_dims(), vec![3, 2, 1, 0]);
        assert_eq!(f.n, 3);

        let k = build(fixtures::k());
        let f = radical_filtration(&k).unwrap();
        assert_eq!(f.layer_dims(), vec![1, 0]);
        assert_eq!(f.n, 1);
    }

    #[test]
    fn grading_filtration_matches_radical_for_corpus() {
        let d = build(fixtures::d());
        let r = radical_filtration(&d).unwrap();
        let g = grading_filtration(&d).unwrap();
        assert_eq!(r.layer_dims(), g.layer_dims());
        for (a, b) in r.layers.iter().zip(&g.layers) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bad_layer_is_rejected_on_the_right_side() {
        // span{e_2} in A2 is closed under left but not right multiplication.
        let a2 = build(fixtures::a2());
        let full = Subspace::full(a2.field, a2.dim());
        let e2 = Subspace::from_vectors(a2.field, a2.dim(), &[a2.idem_vec(1)]);
        let zero = Subspace::empty(a2.field, a2.dim());
        let err = validate_filtration(&a2, vec![full, e2, zero]).unwrap_err();
        match err {
            FiltrationError::NotAnIdeal { layer: 1, side } => assert_eq!(side, "right"),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn trivial_filtration_of_k() {
        let k = build(fixtures::k());
        let full = Subspace::full(k.field, k.dim());
        let zero = Subspace::empty(k.field, k.dim());
        let f = validate_filtration(&k, vec![full, zero]).unwrap();
        assert_eq!(f.n, 1);
    }

    #[test]
    fn loewy_values_for_corpus() {
        let a2 = build(fixtures::a2());
        let f = radical_filtration(&a2).unwrap();
        assert_eq!(loewy_lengths(&a2, &f), vec![(1, 2), (2, 1)]);

        let d = build(fixtures::d());
        let f = radical_filtration(&d).unwrap();
        assert_eq!(loewy_lengths(&d, &f), vec![(2, 2)]);

        let k = build(fixtures::k());
        let f = radical_filtration(&k).unwrap();
        assert_eq!(loewy_lengths(&k, &f), vec![(1, 1)]);

        let n3 = build(fixtures::n3());
        let f = radical_filtration(&n3).unwrap();
        assert_eq!(loewy_lengths(&n3, &f), vec![(3, 3)]);
    }

    #[test]
    fn rigidity_of_corpus_algebras() {
        let d = build(fixtures::d());
        let f = radical_filtration(&d).unwrap();
        assert!(is_rigid(&d, &f));

        let n3 = build(fixtures::n3());
        let f = radical_filtration(&n3).unwrap();
        assert!(is_rigid(&n3, &f));

        let a2 = build(fixtures::a2());
        let f = radical_filtration(&a2).unwrap();
        assert!(!is_rigid(&a2, &f));
    }

    #[test]
    fn radical_power_extremes() {
        for p in [fixtures::d(), fixtures::n3(), fixtures::a2()] {
            let a = build(p);
            let f = radical_filtration(&a).unwrap();
            let pows = radical_powers(&a, &f);
            assert_eq!(pows.len() - 1, f.n, "I_1^N = 0 and I_1^(N-1) != 0");
        }
    }

    #[test]
    fn layer_products_of_d_vanish() {
        let d = build(fixtures::d());
        let f = radical_filtration(&d).unwrap();
        let x = d.basis_vec(1);
        assert!(f.layers[2].contains(&d.product_vec(&x, &x)));
    }

    #[test]
    fn adapted_basis_is_monomial_for_radical() {
        let a2 = build(fixtures::a2());
        let f = radical_filtration(&a2).unwrap();
        assert_eq!(f.adapted.vectors.len(), 3);
        for av in &f.adapted.vectors {
            assert!(av.coords.iter().filter(|c| !c.is_zero()).count() == 1);
        }
    }
}
