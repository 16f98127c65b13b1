use std::collections::HashMap;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gf::{enumerate_pp, is_permutation_poly, FieldPoly, FieldSpec, PpMode};

/// Dimension of the code: polynomials of degree at most 4.
const K: usize = 5;

/// Evaluations of every permutation polynomial of degree `< k` at `t`
/// distinct points. Every codeword has pairwise distinct symbols.
#[derive(Debug, Clone)]
pub struct DistinctCode {
    field: FieldSpec,
    eval_points: Vec<usize>,
    polys: Vec<FieldPoly>,
    codewords: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

/// Builds the code of length `t`. Points default to `0..t`. Small fields
/// enumerate exhaustively, larger ones through normalized forms.
pub fn build_distinct_code(
    field: &FieldSpec,
    t: usize,
    eval_points: Option<Vec<usize>>,
    caps: &Caps,
) -> Result<DistinctCode> {
    let n = field.size();
    if t < K || t > n {
        return Err(Error::param(format!(
            "code length t={t} must satisfy {K} <= t <= {n}"
        )));
    }
    let eval_points = eval_points.unwrap_or_else(|| (0..t).collect());
    if eval_points.len() != t {
        return Err(Error::LengthMismatch {
            expected: t,
            found: eval_points.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in &eval_points {
        if p >= n {
            return Err(Error::OutOfRange { symbol: p, n });
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::DuplicateEvalPoint(p));
        }
    }
    let mode = if n <= caps.pp_exhaustive {
        PpMode::Exhaustive
    } else {
        PpMode::Normalized
    };
    let polys = enumerate_pp(field, K - 1, mode, caps)?;
    caps.check_materialize("distinct code", polys.len() as u128)?;
    let codewords: Vec<Vec<usize>> = polys
        .iter()
        .map(|p| eval_points.iter().map(|&x| p.eval(field, x)).collect())
        .collect();
    let index: HashMap<Vec<usize>, usize> = codewords
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    debug_assert_eq!(index.len(), codewords.len());
    Ok(DistinctCode {
        field: field.clone(),
        eval_points,
        polys,
        codewords,
        index,
    })
}

impl DistinctCode {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn t(&self) -> usize {
        self.eval_points.len()
    }

    pub fn k(&self) -> usize {
        K
    }

    /// Minimum distance `t - k + 1`.
    pub fn distance(&self) -> usize {
        self.t() - K + 1
    }

    pub fn eval_points(&self) -> &[usize] {
        &self.eval_points
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn polys(&self) -> &[FieldPoly] {
        &self.polys
    }

    pub fn codewords(&self) -> &[Vec<usize>] {
        &self.codewords
    }

    pub fn contains(&self, word: &[usize]) -> bool {
        self.index.contains_key(word)
    }

    pub fn position_of(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Lagrange interpolation through the first `k` of the given `(coordinate, value)` pairs.
    pub fn interpolate(&self, known: &[(usize, usize)]) -> Result<FieldPoly> {
        if known.len() < K {
            return Err(Error::param(format!(
                "{} known symbols, need {K}",
                known.len()
            )));
        }
        let f = &self.field;
        let pts: Vec<(usize, usize)> = known[..K]
            .iter()
            .map(|&(coord, y)| {
                let x = *self.eval_points.get(coord).ok_or(Error::IndexOutOfRange {
                    pos: coord,
                    n: self.t(),
                })?;
                Ok((x, y))
            })
            .collect::<Result<_>>()?;
        let mut acc = vec![0usize; K];
        for (i, &(xi, yi)) in pts.iter().enumerate() {
            let mut basis = vec![1usize];
            let mut denom = 1usize;
            for (j, &(xj, _)) in pts.iter().enumerate() {
                if i == j {
                    continue;
                }
                if xi == xj {
                    return Err(Error::DuplicateEvalPoint(xi));
                }
                // multiply by (x + xj)
                let mut next = vec![0usize; basis.len() + 1];
                for (d, &c) in basis.iter().enumerate() {
                    next[d + 1] ^= c;
                    next[d] ^= f.mul(c, xj);
                }
                basis = next;
                denom = f.mul(denom, xi ^ xj);
            }
            let scale = f.div(yi, denom)?;
            for (a, &c) in acc.iter_mut().zip(&basis) {
                *a ^= f.mul(scale, c);
            }
        }
        Ok(FieldPoly::new(acc))
    }

    /// Fills the erased coordinates of a codeword from any `k` known ones.
    pub fn erasure_interpolate(&self, partial: &[Option<usize>]) -> Result<Vec<usize>> {
        if partial.len() != self.t() {
            return Err(Error::LengthMismatch {
                expected: self.t(),
                found: partial.len(),
            });
        }
        let known: Vec<(usize, usize)> = partial
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .collect();
        let poly = self.interpolate(&known)?;
        let word: Vec<usize> = self
            .eval_points
            .iter()
            .map(|&x| poly.eval(&self.field, x))
            .collect();
        let consistent = known.iter().all(|&(i, v)| word[i] == v);
        if !consistent || !is_permutation_poly(&self.field, poly.coeffs()) {
            return Err(Error::NotInCode);
        }
        Ok(word)
    }
}
