//! The tilde extension: for every vertex k attach a new vertex k~ and an
//! arrow k -> k~, keeping the original relations. The input algebra is
//! recovered both as the corner on the original vertices and as the
//! idempotent quotient killing the new ones, and the radical nilpotency
//! degree grows by exactly one.

use crate::algebra::{compute_basis, AlgebraError, FiniteDimAlgebra};
use crate::filtration::{loewy_lengths, radical_filtration, FiltrationError, IdealFiltration};
use crate::presentation::{AlgebraPresentation, ArrowSpec, PresentationError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TildeError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error("corner on original vertices does not reproduce the input algebra")]
    CentralizerMismatch,
    #[error("idempotent quotient does not reproduce the input algebra")]
    QuotientMismatch,
    #[error("radical nilpotency degree is {got}, expected {expected}")]
    NilpotencyDegree { got: usize, expected: usize },
    #[error("projective at original vertex {vertex} has Loewy length {got}, not strictly below {bound}")]
    LoewyNotStrict { vertex: String, got: usize, bound: usize },
}

/// Naming convention for attached vertices and arrows.
pub fn tilde_vertex_name(base: &str) -> String {
    format!("{base}~")
}

pub fn tilde_arrow_name(base: &str) -> String {
    format!("t_{base}")
}

/// The presentation of the extended algebra.
pub fn tilde_presentation(p: &AlgebraPresentation) -> AlgebraPresentation {
    let mut vertices = p.vertices.clone();
    vertices.extend(p.vertices.iter().map(|v| tilde_vertex_name(v)));
    let mut arrows = p.arrows.clone();
    for v in &p.vertices {
        arrows.push(ArrowSpec {
            name: tilde_arrow_name(v),
            source: v.clone(),
            target: tilde_vertex_name(v),
        });
    }
    let grading = p.grading.as_ref().map(|g| {
        let mut g = g.clone();
        for v in &p.vertices {
            g.insert(tilde_arrow_name(v), 1);
        }
        g
    });
    AlgebraPresentation {
        field: p.field,
        vertices,
        arrows,
        relations: p.relations.clone(),
        degree_cap: p.degree_cap + 1,
        grading,
        trace: None,
        tamper: p.tamper.clone(),
    }
}

#[derive(Debug)]
pub struct TildeExtension {
    pub base: FiniteDimAlgebra,
    pub base_filtration: IdealFiltration,
    pub extended: FiniteDimAlgebra,
    pub extended_filtration: IdealFiltration,
    /// Loewy lengths of the extended algebra, per vertex.
    pub loewy: Vec<(usize, usize)>,
}

/// Build the extension and certify its structural relationship with the
/// input: corner recovery, quotient recovery, nilpotency degree N+1, and
/// strictly smaller Loewy length of the projectives at original vertices.
pub fn tilde_extension(p: &AlgebraPresentation) -> Result<TildeExtension, TildeError> {
    let base = compute_basis(&p.validate()?)?;
    let base_filtration = radical_filtration(&base)?;
    let tp = tilde_presentation(p);
    let mut extended = compute_basis(&tp.validate()?)?;
    let nv = base.vertex_names.len();
    for v in nv..extended.vertex_names.len() {
        extended.vertex_tilded[v] = true;
    }
    let extended_filtration = radical_filtration(&extended)?;

    let original: Vec<usize> = (0..nv).collect();
    let tilded: Vec<usize> = (nv..extended.vertex_names.len()).collect();

    let corner = extended.corner_on_vertices(&original);
    let map = corner.label_bijection(&base).ok_or(TildeError::CentralizerMismatch)?;
    if !corner.structure_constants_equal(&base, &map) {
        return Err(TildeError::CentralizerMismatch);
    }

    let quotient = extended.idempotent_quotient(&tilded)?;
    let map = quotient.label_bijection(&base).ok_or(TildeError::QuotientMismatch)?;
    if !quotient.structure_constants_equal(&base, &map) {
        return Err(TildeError::QuotientMismatch);
    }

    let expected = base_filtration.n + 1;
    if extended_filtration.n != expected {
        return Err(TildeError::NilpotencyDegree { got: extended_filtration.n, expected });
    }

    let loewy = loewy_lengths(&extended, &extended_filtration);
    for &k in &original {
        // Paths into an original vertex never use the attached arrows, so the
        // projective on that side stays strictly below the nilpotency degree.
        let (ll, _) = loewy[k];
        if ll >= expected {
            return Err(TildeError::LoewyNotStrict {
                vertex: extended.vertex_names[k].clone(),
                got: ll,
                bound: expected,
            });
        }
    }

    Ok(TildeExtension { base, base_filtration, extended, extended_filtration, loewy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::fixtures;

    #[test]
    fn tilde_of_k_is_the_two_vertex_line() {
        let t = tilde_extension(&fixtures::k()).unwrap();
        assert_eq!(t.extended.dim(), 3);
        assert_eq!(t.extended.vertex_names, vec!["1".to_string(), "1~".to_string()]);
        assert_eq!(t.extended_filtration.n, 2);
        // same shape as the path algebra of the line quiver
        let a2 = crate::algebra::compute_basis(&fixtures::a2().validate().unwrap()).unwrap();
        assert_eq!(t.extended.dim(), a2.dim());
        let lens: Vec<u32> = t.extended.basis.iter().map(|b| b.len).collect();
        let lens2: Vec<u32> = a2.basis.iter().map(|b| b.len).collect();
        assert_eq!(lens, lens2);
    }

    #[test]
    fn tilde_of_a2_has_dimension_eight() {
        let t = tilde_extension(&fixtures::a2()).unwrap();
        assert_eq!(t.extended.vertex_names.len(), 4);
        assert_eq!(t.extended.arrows.len(), 3);
        assert_eq!(t.extended.dim(), 8);
        assert_eq!(t.extended_filtration.n, 3);
    }

    #[test]
    fn tilde_of_d_has_dimension_five() {
        let t = tilde_extension(&fixtures::d()).unwrap();
        assert_eq!(t.extended.dim(), 5);
        assert_eq!(t.extended_filtration.n, 3);
        let labels: Vec<&str> = t.extended.basis.iter().map(|b| b.label.as_str()).collect();
        assert!(labels.contains(&"x*t_1"));
    }

    #[test]
    fn tilde_of_n3_has_dimension_seven() {
        let t = tilde_extension(&fixtures::n3()).unwrap();
        assert_eq!(t.extended.dim(), 7);
        assert_eq!(t.extended_filtration.n, 4);
    }
}
