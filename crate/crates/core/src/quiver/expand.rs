//! Generic matrices for arrows and trace expansion of potentials.

use super::{CompletedQuiver, DimensionVector, PathPolynomial, Potential, Quiver, QuiverError};
use crate::poly::{Monomial, Poly, Var};
use num_rational::BigRational;

/// Assignment of scalar variables to matrix entries: arrow `a: i -> j` gets a
/// `d_j x d_i` matrix, variables numbered arrow-major then row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarLayout {
    pub d: DimensionVector,
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
    names: Vec<String>,
}

impl VarLayout {
    pub fn new(q: &Quiver, d: &DimensionVector) -> Result<Self, QuiverError> {
        q.check_dim(d)?;
        let mut offsets = Vec::with_capacity(q.arrows.len());
        let mut shapes = Vec::with_capacity(q.arrows.len());
        let mut names = Vec::new();
        for a in &q.arrows {
            let (rows, cols) = (d[a.tgt] as usize, d[a.src] as usize);
            offsets.push(names.len());
            shapes.push((rows, cols));
            for r in 0..rows {
                for c in 0..cols {
                    names.push(format!("{}[{r},{c}]", a.name));
                }
            }
        }
        Ok(VarLayout { d: d.clone(), offsets, shapes, names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn shape(&self, arrow: usize) -> (usize, usize) {
        self.shapes[arrow]
    }

    pub fn var(&self, arrow: usize, row: usize, col: usize) -> Var {
        let (_, cols) = self.shapes[arrow];
        (self.offsets[arrow] + row * cols + col) as Var
    }

    /// Variables of one arrow, row-major.
    pub fn arrow_vars(&self, arrow: usize) -> std::ops::Range<usize> {
        let (r, c) = self.shapes[arrow];
        self.offsets[arrow]..self.offsets[arrow] + r * c
    }

    /// `(arrow, row, col)` of a variable.
    pub fn locate(&self, v: Var) -> (usize, usize, usize) {
        let v = v as usize;
        let arrow = (0..self.offsets.len())
            .find(|&a| v < self.offsets[a] + self.shapes[a].0 * self.shapes[a].1)
            .expect("variable in range");
        let (_, cols) = self.shapes[arrow];
        let k = v - self.offsets[arrow];
        (arrow, k / cols, k % cols)
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Monomials of entry `(row, col)` of `M(w[0]) ... M(w[k-1])`.
fn word_entry(q: &Quiver, layout: &VarLayout, word: &[usize], row: usize, col: usize, out: &mut Vec<Vec<Var>>) {
    fn go(q: &Quiver, layout: &VarLayout, word: &[usize], i: usize, col: usize, acc: &mut Vec<Var>, out: &mut Vec<Vec<Var>>) {
        let a = word[0];
        if word.len() == 1 {
            acc.push(layout.var(a, i, col));
            out.push(acc.clone());
            acc.pop();
            return;
        }
        let inner = layout.d[q.arrows[a].src] as usize;
        for j in 0..inner {
            acc.push(layout.var(a, i, j));
            go(q, layout, &word[1..], j, col, acc, out);
            acc.pop();
        }
    }
    go(q, layout, word, row, col, &mut Vec::new(), out);
}

/// Entries of a path polynomial evaluated at generic matrices, row-major
/// `d_tgt x d_src`.
pub fn path_matrix(q: &Quiver, layout: &VarLayout, p: &PathPolynomial) -> Vec<Poly> {
    let (rows, cols) = (layout.d[p.tgt] as usize, layout.d[p.src] as usize);
    let mut out = Vec::with_capacity(rows * cols);
    let mut monos = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let mut entry = Poly::zero();
            for (word, coeff) in p.terms() {
                monos.clear();
                word_entry(q, layout, word, r, c, &mut monos);
                let k = BigRational::from_integer(coeff.clone());
                for m in &monos {
                    entry.add_term(Monomial::from_vars(m), k.clone());
                }
            }
            out.push(entry);
        }
    }
    out
}

/// `sum_words c_w tr(M(w))` over the given layout.
pub fn trace_expand_potential(q: &Quiver, layout: &VarLayout, w: &Potential) -> Poly {
    let mut f = Poly::zero();
    let mut monos = Vec::new();
    for (word, coeff) in w.terms() {
        let node = q.arrows[word[0]].tgt;
        let k = BigRational::from_integer(coeff.clone());
        for i in 0..layout.d[node] as usize {
            monos.clear();
            word_entry(q, layout, word, i, i, &mut monos);
            for m in &monos {
                f.add_term(Monomial::from_vars(m), k.clone());
            }
        }
    }
    f
}

/// Chern-Simons polynomial of a completed quiver at a dimension vector.
#[derive(Clone, Debug)]
pub struct CsFunction {
    pub layout: VarLayout,
    pub poly: Poly,
    /// Per variable: whether it is an entry of a dual arrow.
    pub dual: Vec<bool>,
}

impl CsFunction {
    pub fn render(&self) -> String {
        self.poly.render(&|v| self.layout.name(v).to_string())
    }

    pub fn dual_count(&self) -> usize {
        self.dual.iter().filter(|&&b| b).count()
    }
}

pub fn trace_expand(cq: &CompletedQuiver, d: &DimensionVector) -> Result<CsFunction, QuiverError> {
    let layout = VarLayout::new(&cq.quiver, d)?;
    let poly = trace_expand_potential(&cq.quiver, &layout, &cq.potential);
    let dual = (0..layout.len()).map(|v| cq.is_dual_arrow(layout.locate(v as Var).0)).collect();
    Ok(CsFunction { layout, poly, dual })
}
