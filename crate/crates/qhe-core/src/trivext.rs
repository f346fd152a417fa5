//! The finite trivial extension A + A* with multiplication
//! `(a, f)(b, g) = (ab, a.g + f.b)`, where the dual carries the regular
//! bimodule action `(a.g)(c) = g(c a)` and `(f.b)(c) = f(b c)`.
//!
//! The extension is always symmetric under the canonical form
//! `((a, f), (b, g)) = f(b) + g(a)`, which is the trace form of the
//! functional `(a, f) -> f(1)`.

use crate::algebra::{BasisPath, FiniteDimAlgebra};
use crate::form::{check_symmetric, FormError, TraceForm};
use crate::scalar::{vec_ops, Scalar};

/// The trivial extension together with the split into the original part and
/// the dual part of its basis.
#[derive(Debug)]
pub struct TrivialExtension {
    pub algebra: FiniteDimAlgebra,
    /// Basis indices `0..dual_offset` are the original algebra, the rest are
    /// the dual basis in the same order.
    pub dual_offset: usize,
}

pub fn trivial_extension_finite(alg: &FiniteDimAlgebra) -> TrivialExtension {
    let n = alg.dim();
    let dim = 2 * n;
    let field = alg.field;
    let zero_row = || vec_ops::zeros(field, dim);

    let embed = |v: &[Scalar], dual: bool| -> Vec<Scalar> {
        let mut w = vec_ops::zeros(field, dim);
        for (i, c) in v.iter().enumerate() {
            w[if dual { n + i } else { i }] = c.clone();
        }
        w
    };

    // a.g with g the dual of basis t: (a.g)(c) = g(c a), so the coefficient
    // of (c)* in a.(t)* is the t-coordinate of c*a.
    let left_on_dual = |ai: usize, t: usize| -> Vec<Scalar> {
        let mut out = vec_ops::zeros(field, n);
        for c in 0..n {
            out[c] = alg.product_basis(c, ai)[t].clone();
        }
        out
    };
    // (f.b)(c) = f(b c): coefficient of (c)* in (t)*.b is the t-coordinate
    // of b*c.
    let right_on_dual = |t: usize, bi: usize| -> Vec<Scalar> {
        let mut out = vec_ops::zeros(field, n);
        for c in 0..n {
            out[c] = alg.product_basis(bi, c)[t].clone();
        }
        out
    };

    let mut mul = vec![vec![zero_row(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            mul[i][j] = match (i < n, j < n) {
                (true, true) => embed(alg.product_basis(i, j), false),
                (true, false) => embed(&left_on_dual(i, j - n), true),
                (false, true) => embed(&right_on_dual(i - n, j), true),
                (false, false) => zero_row(),
            };
        }
    }

    let basis: Vec<BasisPath> = alg
        .basis
        .iter()
        .map(|b| b.clone())
        .chain(alg.basis.iter().map(|b| BasisPath {
            arrows: Vec::new(),
            src: b.tgt,
            tgt: b.src,
            len: 0,
            degree: 0, // regraded on demand via `graded_component`
            label: format!("({})*", b.label),
        }))
        .collect();

    // prepend tables so that path reduction keeps working on the original
    // part and acts correctly on duals.
    let mut prepend = Vec::new();
    for a in 0..alg.arrows.len() {
        if alg.arrows[a].tgt >= alg.vertex_names.len() {
            // arrow from a vertex removed by an idempotent quotient
            prepend.push(vec![zero_row(); dim]);
            continue;
        }
        let arrow_vec = {
            let one_arrow = alg.reduce_path(&[a]);
            embed(&one_arrow, false)
        };
        let mut per = Vec::new();
        for j in 0..dim {
            let mut out = zero_row();
            for (t, c) in arrow_vec.iter().enumerate() {
                if !c.is_zero() {
                    for (k, m) in mul[t][j].iter().enumerate() {
                        out[k] = out[k].add(&c.mul(m));
                    }
                }
            }
            per.push(out);
        }
        prepend.push(per);
    }

    let algebra = FiniteDimAlgebra::from_parts(
        field,
        alg.vertex_names.clone(),
        alg.vertex_tilded.clone(),
        alg.arrows.clone(),
        alg.arrow_names.clone(),
        basis,
        alg.idem.clone(),
        mul,
        prepend,
    );
    TrivialExtension { algebra, dual_offset: n }
}

impl TrivialExtension {
    /// Basis indices of the graded component with `deg A_i* = N - 1 - i`,
    /// where `original` is the underlying algebra and `n` its filtration
    /// length. Negative components must be empty.
    pub fn graded_component(&self, original: &FiniteDimAlgebra, n: usize, m: i64) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, b) in original.basis.iter().enumerate() {
            if b.degree as i64 == m {
                out.push(i);
            }
        }
        for (i, b) in original.basis.iter().enumerate() {
            if (n as i64) - 1 - (b.degree as i64) == m {
                out.push(self.dual_offset + i);
            }
        }
        out
    }

    /// All components below degree zero are empty (the dual regrading stays
    /// nonnegative because the algebra is concentrated in degrees < N).
    pub fn negative_components_vanish(&self, original: &FiniteDimAlgebra, n: usize) -> bool {
        let max_deg = original.basis.iter().map(|b| b.degree as i64).max().unwrap_or(0);
        max_deg <= n as i64 - 1
    }

    /// The canonical trace functional `(a, f) -> f(1)`; its Gram matrix is
    /// certified symmetric and nondegenerate.
    pub fn canonical_form(&self, original: &FiniteDimAlgebra) -> Result<TraceForm, FormError> {
        let dim = self.algebra.dim();
        let mut lambda = vec_ops::zeros(self.algebra.field, dim);
        for (i, _) in original.basis.iter().enumerate() {
            if original.basis[i].arrows.is_empty() && original.basis[i].len == 0 {
                // dual of an idempotent evaluates to 1 on the unit
                lambda[self.dual_offset + i] = self.algebra.field.one();
            }
        }
        check_symmetric(&self.algebra, &lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::compute_basis;
    use crate::filtration::radical_filtration;
    use crate::presentation::fixtures;

    fn build(p: crate::presentation::AlgebraPresentation) -> FiniteDimAlgebra {
        compute_basis(&p.validate().unwrap()).unwrap()
    }

    #[test]
    fn trivial_extension_of_k_is_dual_numbers() {
        let k = build(fixtures::k());
        let t = trivial_extension_finite(&k);
        assert_eq!(t.algebra.dim(), 2);
        let d = build(fixtures::d());
        // identical multiplication tables under (e, e*) -> (e, x)
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(t.algebra.product_basis(i, j), d.product_basis(i, j));
            }
        }
        t.canonical_form(&k).unwrap();
    }

    #[test]
    fn trivial_extension_of_a2_is_symmetric_of_dim_six() {
        let a2 = build(fixtures::a2());
        let t = trivial_extension_finite(&a2);
        assert_eq!(t.algebra.dim(), 6);
        assert!(t.algebra.check_associativity_exhaustive().is_ok());
        let form = t.canonical_form(&a2).unwrap();
        assert_eq!(form.gram.rows, 6);
    }

    #[test]
    fn every_corpus_extension_is_symmetric() {
        for p in [fixtures::k(), fixtures::d(), fixtures::n3(), fixtures::a2()] {
            let a = build(p);
            let t = trivial_extension_finite(&a);
            assert!(t.algebra.check_associativity_exhaustive().is_ok());
            t.canonical_form(&a).unwrap();
        }
    }

    #[test]
    fn graded_components_of_d() {
        let d = build(fixtures::d());
        let f = radical_filtration(&d).unwrap();
        let t = trivial_extension_finite(&d);
        assert!(t.negative_components_vanish(&d, f.n));
        // component 0: e and (x)* since deg (x)* = 2 - 1 - 1 = 0
        let c0 = t.graded_component(&d, f.n, 0);
        assert_eq!(c0.len(), 2);
        let labels: Vec<&str> = c0.iter().map(|&i| t.algebra.basis[i].label.as_str()).collect();
        assert_eq!(labels, vec!["e_1", "(x)*"]);
        let c1 = t.graded_component(&d, f.n, 1);
        let labels: Vec<&str> = c1.iter().map(|&i| t.algebra.basis[i].label.as_str()).collect();
        assert_eq!(labels, vec!["x", "(e_1)*"]);
    }
}
