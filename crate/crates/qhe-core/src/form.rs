//! Symmetric trace forms on a finite-dimensional algebra: Gram matrices,
//! nondegeneracy certificates, and the pairing condition between quotients
//! and ideal layers of a filtration.

use crate::algebra::FiniteDimAlgebra;
use crate::envelope::{Category, EnvelopeCat, TrivExtCat};
use crate::filtration::IdealFiltration;
use crate::linalg::{kernel_basis, rank, Mat, Subspace};
use crate::scalar::{vec_ops, Scalar};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormError {
    #[error("form is not symmetric: (b{i}, b{j}) != (b{j}, b{i})")]
    NotSymmetric { i: usize, j: usize },
    #[error("form is degenerate; a radical vector is recorded in the witness")]
    Degenerate { radical_vector: Vec<String> },
    #[error("form is not associative on triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("pairing between A/I_{j} and I_{complement} is degenerate (rank {rank}, expected {expected})")]
    PairingDegenerate { j: usize, complement: usize, rank: usize, expected: usize },
    #[error("orthogonal complement of I_{j} is not I_{complement}")]
    NotOrthogonalComplement { j: usize, complement: usize },
}

/// A certified trace form: the functional and its Gram matrix.
#[derive(Debug, Clone)]
pub struct TraceForm {
    pub lambda: Vec<Scalar>,
    pub gram: Mat,
}

impl TraceForm {
    pub fn eval(&self, v: &[Scalar]) -> Scalar {
        let mut acc = self.lambda[0].field().zero();
        for (l, x) in self.lambda.iter().zip(v) {
            acc = acc.add(&l.mul(x));
        }
        acc
    }

    /// Value of the bilinear form (u, v) = lambda(u * v).
    pub fn pair(&self, alg: &FiniteDimAlgebra, u: &[Scalar], v: &[Scalar]) -> Scalar {
        self.eval(&alg.product_vec(u, v))
    }
}

/// Build the Gram matrix of `(u, v) = lambda(u v)` and certify symmetry,
/// associativity, and nondegeneracy.
pub fn check_symmetric(alg: &FiniteDimAlgebra, lambda: &[Scalar]) -> Result<TraceForm, FormError> {
    let n = alg.dim();
    let mut gram = Mat::zeros(alg.field, n, n);
    let eval = |v: &[Scalar]| -> Scalar {
        let mut acc = alg.field.zero();
        for (l, x) in lambda.iter().zip(v) {
            acc = acc.add(&l.mul(x));
        }
        acc
    };
    for i in 0..n {
        for j in 0..n {
            *gram.at_mut(i, j) = eval(alg.product_basis(i, j));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if gram.at(i, j) != gram.at(j, i) {
                return Err(FormError::NotSymmetric { i, j });
            }
        }
    }
    // Associativity (u v, w) = (u, v w) holds for any trace form; checked
    // anyway on all basis triples.
    for i in 0..n {
        for j in 0..n {
            let ij = alg.product_basis(i, j).to_vec();
            for k in 0..n {
                let lhs = eval(&alg.product_vec(&ij, &alg.basis_vec(k)));
                let rhs = eval(&alg.product_vec(&alg.basis_vec(i), alg.product_basis(j, k)));
                if lhs != rhs {
                    return Err(FormError::NotAssociative { i, j, k });
                }
            }
        }
    }
    let ker = kernel_basis(&gram);
    if let Some(v) = ker.first() {
        return Err(FormError::Degenerate {
            radical_vector: v.iter().map(Scalar::to_string).collect(),
        });
    }
    Ok(TraceForm { lambda: lambda.to_vec(), gram })
}

/// For every j, the form must pair `A/I_j` with `I_{N-j}` perfectly:
/// the Gram block between a lift of a basis of the quotient and a basis of
/// the complementary layer has full rank, and `I_{N-j}` is the exact
/// orthogonal complement of `I_j`.
pub fn check_pairing_condition(
    alg: &FiniteDimAlgebra,
    filt: &IdealFiltration,
    form: &TraceForm,
) -> Result<(), FormError> {
    let n = filt.n;
    for j in 0..=n {
        let quot_lift: Vec<Vec<Scalar>> = filt
            .adapted
            .vectors
            .iter()
            .filter(|av| av.layer < j)
            .map(|av| av.coords.clone())
            .collect();
        let comp = &filt.layers[n - j];
        let expected = quot_lift.len();
        if comp.dim() != expected {
            return Err(FormError::PairingDegenerate {
                j,
                complement: n - j,
                rank: comp.dim(),
                expected,
            });
        }
        if expected == 0 {
            continue;
        }
        let mut block = Mat::zeros(alg.field, expected, expected);
        for (r, u) in quot_lift.iter().enumerate() {
            for (c, v) in comp.basis().iter().enumerate() {
                *block.at_mut(r, c) = form.pair(alg, u, v);
            }
        }
        let rk = rank(&block);
        if rk != expected {
            return Err(FormError::PairingDegenerate { j, complement: n - j, rank: rk, expected });
        }
        // Orthogonal complement of I_j must be exactly I_{N-j}.
        let layer = &filt.layers[j];
        if layer.dim() > 0 {
            let mut rows = Vec::new();
            for u in layer.basis() {
                let row: Vec<Scalar> =
                    (0..alg.dim()).map(|b| form.pair(alg, u, &alg.basis_vec(b))).collect();
                rows.push(row);
            }
            let perp = Subspace::from_vectors(
                alg.field,
                alg.dim(),
                &kernel_basis(&Mat::from_rows(alg.field, rows)),
            );
            if perp != filt.layers[n - j] {
                return Err(FormError::NotOrthogonalComplement { j, complement: n - j });
            }
        }
    }
    Ok(())
}

/// Basis of the space of symmetric functionals, i.e. those vanishing on all
/// commutators `uv - vu`.
pub fn symmetric_functionals(alg: &FiniteDimAlgebra) -> Vec<Vec<Scalar>> {
    let n = alg.dim();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut comm = alg.product_basis(i, j).to_vec();
            let ji = alg.product_basis(j, i);
            for (c, d) in comm.iter_mut().zip(ji) {
                *c = c.sub(d);
            }
            if !vec_ops::is_zero(&comm) {
                rows.push(comm);
            }
        }
    }
    if rows.is_empty() {
        return Mat::identity(alg.field, n).row_vecs();
    }
    kernel_basis(&Mat::from_rows(alg.field, rows))
}

/// A nonzero vector lying in the Gram radical of every symmetric functional
/// at once. When one exists, no symmetric trace form on the algebra can be
/// nondegenerate.
pub fn common_gram_radical(alg: &FiniteDimAlgebra) -> Option<Vec<Scalar>> {
    let functionals = symmetric_functionals(alg);
    let n = alg.dim();
    let mut rows = Vec::new();
    for lambda in &functionals {
        let form = TraceForm { lambda: lambda.clone(), gram: Mat::zeros(alg.field, 0, 0) };
        for b in 0..n {
            let row: Vec<Scalar> =
                (0..n).map(|v| form.pair(alg, &alg.basis_vec(b), &alg.basis_vec(v))).collect();
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return None;
    }
    let ker = kernel_basis(&Mat::from_rows(alg.field, rows));
    ker.into_iter().next()
}

/// The form on the windowed envelope pairs the slot (u, v) with (v, u):
/// (x, y) -> lambda(lift(x) * lift(y)). Lift-independence is automatic
/// because perturbations multiply into the top layer, which the functional
/// kills.
pub fn pair_on_window(cat: &EnvelopeCat, form: &TraceForm, u: usize, v: usize, x: &[Scalar], y: &[Scalar]) -> Scalar {
    let lx = cat.lift(u, v, x);
    let ly = cat.lift(v, u, y);
    form.pair(&cat.algebra, &lx, &ly)
}

/// The canonical form on the trivial extension: ((a, f), (b, g)) = f(b) + g(a).
pub fn pair_on_extension(dcat: &TrivExtCat, u: usize, v: usize, x: &[Scalar], y: &[Scalar]) -> Scalar {
    let (a, f) = dcat.split(u, v, x);
    let (b, g) = dcat.split(v, u, y);
    let field = dcat.field();
    let mut acc = field.zero();
    for (fi, bi) in f.iter().zip(b) {
        if !fi.is_zero() && !bi.is_zero() {
            acc = acc.add(&fi.mul(bi));
        }
    }
    for (gi, ai) in g.iter().zip(a) {
        if !gi.is_zero() && !ai.is_zero() {
            acc = acc.add(&gi.mul(ai));
        }
    }
    acc
}

#[derive(Debug, Error)]
pub enum WindowFormError {
    #[error("form is degenerate on the slot pair {src} / {tgt}: rank {rank}, expected {expected}")]
    FormDegenerate { src: String, tgt: String, rank: usize, expected: usize },
    #[error("form is not symmetric on the slot pair {src} / {tgt}")]
    WindowNotSymmetric { src: String, tgt: String },
    #[error("form is not associative on a sampled composable triple at {0}")]
    WindowNotAssociative(String),
    #[error("slot pair {src} / {tgt} has mismatched dimensions {d1} vs {d2}")]
    SlotDimMismatch { src: String, tgt: String, d1: usize, d2: usize },
}

#[derive(Debug, serde::Serialize)]
pub struct WindowFormReport {
    pub interior_pairs: usize,
    pub total_rank: usize,
    pub associativity_samples: usize,
}

/// Certify symmetry, associativity (sampled), and nondegeneracy on every
/// interior slot pair of the pairing `pair`.
fn certify_window_form<C, F, R>(
    cat: &C,
    pair: F,
    rng: &mut R,
    samples: usize,
) -> Result<WindowFormReport, WindowFormError>
where
    C: Category + ?Sized,
    F: Fn(usize, usize, &[Scalar], &[Scalar]) -> Scalar,
    R: Rng,
{
    let objs = cat.objects();
    let field = cat.field();
    let win = cat.window();
    let unit = |n: usize, t: usize| -> Vec<Scalar> {
        let mut v = vec_ops::zeros(field, n);
        v[t] = field.one();
        v
    };
    let mut pairs = 0usize;
    let mut total_rank = 0usize;
    for u in 0..objs.len() {
        if !win.interior(objs[u].level) {
            continue;
        }
        for v in 0..objs.len() {
            if !win.interior(objs[v].level) {
                continue;
            }
            let d1 = cat.hom_dim(u, v);
            let d2 = cat.hom_dim(v, u);
            if d1 == 0 && d2 == 0 {
                continue;
            }
            if d1 != d2 {
                return Err(WindowFormError::SlotDimMismatch {
                    src: objs[u].name.clone(),
                    tgt: objs[v].name.clone(),
                    d1,
                    d2,
                });
            }
            let mut block = Mat::zeros(field, d1, d2);
            for s in 0..d1 {
                for t in 0..d2 {
                    *block.at_mut(s, t) = pair(u, v, &unit(d1, s), &unit(d2, t));
                }
            }
            // symmetry against the transposed pairing
            for s in 0..d1 {
                for t in 0..d2 {
                    let sym = pair(v, u, &unit(d2, t), &unit(d1, s));
                    if &sym != block.at(s, t) {
                        return Err(WindowFormError::WindowNotSymmetric {
                            src: objs[u].name.clone(),
                            tgt: objs[v].name.clone(),
                        });
                    }
                }
            }
            let rk = rank(&block);
            if rk != d1 {
                return Err(WindowFormError::FormDegenerate {
                    src: objs[u].name.clone(),
                    tgt: objs[v].name.clone(),
                    rank: rk,
                    expected: d1,
                });
            }
            pairs += 1;
            total_rank += rk;
        }
    }
    // associativity: (x, y z) = (x y, z) on sampled composable triples
    let nonzero: Vec<(usize, usize)> = (0..objs.len())
        .flat_map(|u| (0..objs.len()).map(move |v| (u, v)))
        .filter(|&(u, v)| cat.hom_dim(u, v) > 0)
        .collect();
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < samples && attempts < samples * 30 {
        attempts += 1;
        let &(u, v) = &nonzero[rng.gen_range(0..nonzero.len())];
        let ws: Vec<usize> = (0..objs.len())
            .filter(|&w| cat.hom_dim(v, w) > 0 && cat.hom_dim(w, u) > 0)
            .collect();
        if ws.is_empty() {
            continue;
        }
        let w = ws[rng.gen_range(0..ws.len())];
        let rand_vec = |n: usize, rng: &mut R| -> Vec<Scalar> {
            (0..n).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect()
        };
        let x = rand_vec(cat.hom_dim(u, v), rng);
        let y = rand_vec(cat.hom_dim(v, w), rng);
        let z = rand_vec(cat.hom_dim(w, u), rng);
        let xy = cat.compose(u, v, w, &x, &y);
        let yz = cat.compose(v, w, u, &y, &z);
        let lhs = pair(u, w, &xy, &z);
        let rhs = pair(u, v, &x, &yz);
        if lhs != rhs {
            return Err(WindowFormError::WindowNotAssociative(objs[u].name.clone()));
        }
        done += 1;
    }
    Ok(WindowFormReport { interior_pairs: pairs, total_rank, associativity_samples: done })
}

pub fn certify_form_on_window<R: Rng>(
    cat: &EnvelopeCat,
    form: &TraceForm,
    rng: &mut R,
    samples: usize,
) -> Result<WindowFormReport, WindowFormError> {
    certify_window_form(cat, |u, v, x, y| pair_on_window(cat, form, u, v, x, y), rng, samples)
}

pub fn certify_form_on_extension<R: Rng>(
    dcat: &TrivExtCat,
    rng: &mut R,
    samples: usize,
) -> Result<WindowFormReport, WindowFormError> {
    certify_window_form(dcat, |u, v, x, y| pair_on_extension(dcat, u, v, x, y), rng, samples)
}

#[cfg(test)]
mod window_tests {
    use super::*;
    use crate::envelope::test_support::{envelope_of, envelope_of_tilde};
    use crate::envelope::build_d;
    use crate::presentation::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn window_form_on_rigid_symmetric_inputs() {
        let cases = [
            (fixtures::d(), vec!["0", "1"], 4i64),
            (fixtures::n3(), vec!["0", "0", "1"], 6),
        ];
        for (p, lambda, w) in cases {
            let c = envelope_of(p, w);
            let lam: Vec<Scalar> =
                lambda.iter().map(|s| c.algebra.field.parse(s).unwrap()).collect();
            let form = check_symmetric(&c.algebra, &lam).unwrap();
            check_pairing_condition(&c.algebra, &c.filtration, &form).unwrap();
            let mut rng = ChaCha20Rng::seed_from_u64(3);
            let rep = certify_form_on_window(&c, &form, &mut rng, 200).unwrap();
            assert!(rep.interior_pairs > 0);
        }
    }

    #[test]
    fn extension_form_yields_nondegenerate_pairing_everywhere() {
        for (p, w) in [(fixtures::k(), 5), (fixtures::d(), 7), (fixtures::a2(), 7)] {
            let d = build_d(envelope_of_tilde(&p, w));
            let mut rng = ChaCha20Rng::seed_from_u64(5);
            let rep = certify_form_on_extension(&d, &mut rng, 200).unwrap();
            assert!(rep.interior_pairs > 0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::compute_basis;
    use crate::filtration::radical_filtration;
    use crate::presentation::fixtures;
    use crate::scalar::FieldSpec;

    fn build(p: crate::presentation::AlgebraPresentation) -> FiniteDimAlgebra {
        compute_basis(&p.validate().unwrap()).unwrap()
    }

    fn q(s: &str) -> Scalar {
        FieldSpec::Rational.parse(s).unwrap()
    }

    #[test]
    fn dual_numbers_form_is_hyperbolic() {
        let d = build(fixtures::d());
        let lambda = vec![q("0"), q("1")];
        let form = check_symmetric(&d, &lambda).unwrap();
        assert_eq!(form.gram.row(0), &[q("0"), q("1")]);
        assert_eq!(form.gram.row(1), &[q("1"), q("0")]);
    }

    #[test]
    fn n3_form_is_nondegenerate() {
        let n3 = build(fixtures::n3());
        let lambda = vec![q("0"), q("0"), q("1")];
        let form = check_symmetric(&n3, &lambda).unwrap();
        let f = radical_filtration(&n3).unwrap();
        check_pairing_condition(&n3, &f, &form).unwrap();
    }

    #[test]
    fn zero_functional_is_degenerate() {
        let a2 = build(fixtures::a2());
        let lambda = vec![q("0"); 3];
        assert!(matches!(check_symmetric(&a2, &lambda), Err(FormError::Degenerate { .. })));
    }

    #[test]
    fn pairing_condition_for_d_and_k() {
        let d = build(fixtures::d());
        let form = check_symmetric(&d, &[q("0"), q("1")]).unwrap();
        let f = radical_filtration(&d).unwrap();
        check_pairing_condition(&d, &f, &form).unwrap();

        // K: N = 1, only trivial pairings occur.
        let k = build(fixtures::k());
        let form = check_symmetric(&k, &[q("1")]).unwrap();
        let f = radical_filtration(&k).unwrap();
        check_pairing_condition(&k, &f, &form).unwrap();
    }

    #[test]
    fn a2_admits_no_nondegenerate_symmetric_form() {
        let a2 = build(fixtures::a2());
        let rad = common_gram_radical(&a2).expect("common radical vector exists");
        assert!(!vec_ops::is_zero(&rad));
    }

    #[test]
    fn d_does_admit_a_symmetric_form() {
        let d = build(fixtures::d());
        assert!(common_gram_radical(&d).is_none());
    }
}
