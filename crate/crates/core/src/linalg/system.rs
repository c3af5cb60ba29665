//! Relation systems among the permutations of one length-l MZV with formal
//! arguments.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use super::matrix::ExactMatrix;
use crate::combination::{format_rational, rat, ZetaCombination};
use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::stuffle::{interleavings, Slot};

/// A formal argument: the multiset of symbols whose sum it stands for.
pub type Part = Vec<usize>;
/// A formal MZV; the empty sequence is the constant 1.
pub type Word = Vec<Part>;
/// A product of formal MZVs, factors sorted.
pub type Product = Vec<Word>;

fn symbol_name(s: usize) -> String {
    if s < 26 {
        ((b'a' + s as u8) as char).to_string()
    } else {
        format!("x{s}")
    }
}

fn part_name(p: &Part) -> String {
    p.iter().map(|&s| symbol_name(s)).collect::<Vec<_>>().join("+")
}

pub fn word_name(w: &Word) -> String {
    format!("ζ({})", w.iter().map(part_name).collect::<Vec<_>>().join(","))
}

pub fn product_name(p: &Product) -> String {
    if p.is_empty() {
        return "1".into();
    }
    p.iter().map(word_name).collect::<String>()
}

fn merge(a: &Part, b: &Part) -> Part {
    let mut m: Part = a.iter().chain(b).copied().collect();
    m.sort_unstable();
    m
}

/// Formal stuffle: (word, coefficient) pairs of ζ(left)·ζ(right).
fn formal_stuffle(left: &Word, right: &Word) -> Vec<Word> {
    let (m, n) = (left.len(), right.len());
    let mut out = Vec::new();
    for a in 0..=m.min(n) {
        for p in interleavings(m - a, n - a, a) {
            let (mut li, mut ri) = (left.iter(), right.iter());
            let w = p
                .slots
                .iter()
                .map(|s| match s {
                    Slot::Left => li.next().unwrap().clone(),
                    Slot::Right => ri.next().unwrap().clone(),
                    Slot::Both => merge(li.next().unwrap(), ri.next().unwrap()),
                })
                .collect();
            out.push(w);
        }
    }
    out
}

/// One relation: Σ coeff·unknown = Σ coeff·(lower-length product).
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub label: String,
    pub unknowns: BTreeMap<Word, BigRational>,
    pub rhs: BTreeMap<Product, BigRational>,
}

impl Relation {
    fn new(label: String) -> Self {
        Relation { label, unknowns: BTreeMap::new(), rhs: BTreeMap::new() }
    }

    fn add_unknown(&mut self, w: Word, c: BigRational) {
        *self.unknowns.entry(w).or_insert_with(BigRational::zero) += c;
    }

    fn add_rhs(&mut self, mut p: Product, c: BigRational) {
        p.sort();
        *self.rhs.entry(p).or_insert_with(BigRational::zero) += c;
    }
}

/// M·z = A·r for the permutations z of one formal MZV.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationSystem {
    pub length: usize,
    /// Symbol of each argument position; equal symbols model coinciding arguments.
    pub symbols: Vec<usize>,
    pub unknowns: Vec<Word>,
    pub rhs_columns: Vec<Product>,
    pub relations: Vec<Relation>,
    pub matrix: ExactMatrix,
    pub rhs: ExactMatrix,
}

fn distinct_permutations(symbols: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = symbols.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    fn rec(pool: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pool.is_empty() {
            out.push(cur.clone());
            return;
        }
        let mut last = None;
        for i in 0..pool.len() {
            if last == Some(pool[i]) {
                continue;
            }
            last = Some(pool[i]);
            let s = pool.remove(i);
            cur.push(s);
            rec(pool, cur, out);
            cur.pop();
            pool.insert(i, s);
        }
    }
    rec(&mut sorted, &mut Vec::new(), &mut out);
    out
}

fn word_of(seq: &[usize]) -> Word {
    seq.iter().map(|&s| vec![s]).collect()
}

/// Every stuffle relation ζ(A)·ζ(B) with A, B non-empty sequences that
/// together use each argument once. `symbols` gives the symbol of each
/// argument; `[0, 1, .., l-1]` is the generic case.
pub fn assemble_permutation_system(l: usize, symbols: &[usize]) -> Result<PermutationSystem> {
    if l < 2 {
        return Err(Error::Precondition("permutation systems need length >= 2".into()));
    }
    if symbols.len() != l {
        return Err(Error::Precondition(format!("{} symbols given for length {l}", symbols.len())));
    }
    let mut relations = Vec::new();
    let mut seen = BTreeSet::new();
    // a split is an arrangement of all arguments plus a cut position
    for arrangement in distinct_permutations(symbols) {
        for cut in 1..l {
            let (a, b) = (word_of(&arrangement[..cut]), word_of(&arrangement[cut..]));
            if !seen.insert((a.clone(), b.clone())) {
                continue;
            }
            let mut rel = Relation::new(format!("{}·{}", word_name(&a), word_name(&b)));
            for w in formal_stuffle(&a, &b) {
                if w.len() == l {
                    rel.add_unknown(w, BigRational::one());
                } else {
                    rel.add_rhs(vec![w], rat(-1));
                }
            }
            rel.add_rhs(vec![a, b], BigRational::one());
            relations.push(rel);
        }
    }
    build(l, symbols, relations)
}

/// The cyclic three-point relation for each arrangement of three arguments:
/// Σ_cyc ζ(x,y,z) = Σ_cyc ζ(x)ζ(y,z) − ζ(a)ζ(b)ζ(c) + ζ(a+b+c).
pub fn three_point_relations(symbols: &[usize]) -> Result<Vec<Relation>> {
    if symbols.len() != 3 {
        return Err(Error::Precondition("the three-point relation has three arguments".into()));
    }
    let mut out = Vec::new();
    for p in distinct_permutations(symbols) {
        let mut rel = Relation::new(format!("three-point {}", word_name(&word_of(&p))));
        for r in 0..3 {
            let rot: Vec<usize> = (0..3).map(|i| p[(i + r) % 3]).collect();
            rel.add_unknown(word_of(&rot), BigRational::one());
            rel.add_rhs(vec![word_of(&rot[..1]), word_of(&rot[1..])], BigRational::one());
        }
        rel.add_rhs(p.iter().map(|&s| vec![vec![s]]).collect(), rat(-1));
        rel.add_rhs(vec![vec![merge(&merge(&vec![p[0]], &vec![p[1]]), &vec![p[2]])]], BigRational::one());
        out.push(rel);
    }
    Ok(out)
}

impl PermutationSystem {
    /// The same system with extra relations appended.
    pub fn with_relations(&self, extra: Vec<Relation>) -> Result<PermutationSystem> {
        let mut rels = self.relations.clone();
        rels.extend(extra);
        build(self.length, &self.symbols, rels)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

fn build(l: usize, symbols: &[usize], relations: Vec<Relation>) -> Result<PermutationSystem> {
    let unknowns: Vec<Word> = distinct_permutations(symbols).iter().map(|p| word_of(p)).collect();
    let index: BTreeMap<&Word, usize> = unknowns.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let rhs_columns: Vec<Product> =
        relations.iter().flat_map(|r| r.rhs.keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
    let rindex: BTreeMap<&Product, usize> = rhs_columns.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut matrix = ExactMatrix::new(unknowns.iter().map(word_name).collect())?;
    let mut rhs = ExactMatrix::new(rhs_columns.iter().map(product_name).collect())?;
    for rel in &relations {
        let mut row = vec![BigRational::zero(); unknowns.len()];
        for (w, c) in &rel.unknowns {
            let i = *index.get(w).ok_or_else(|| Error::Precondition(format!("{} is not a permutation of the arguments", word_name(w))))?;
            row[i] += c;
        }
        matrix.push_row(row)?;
        let mut row = vec![BigRational::zero(); rhs_columns.len()];
        for (p, c) in &rel.rhs {
            row[rindex[p]] += c;
        }
        rhs.push_row(row)?;
    }
    Ok(PermutationSystem { length: l, symbols: symbols.to_vec(), unknowns, rhs_columns, relations, matrix, rhs })
}

/// One non-basis unknown written over the basis and the lower-length columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    pub unknown: Word,
    pub basis_terms: Vec<(BigRational, Word)>,
    pub rhs_terms: Vec<(BigRational, Product)>,
}

impl Expression {
    /// The relation `unknown − expression = 0` at concrete argument values.
    pub fn instantiate(&self, values: &[u32]) -> Result<ZetaCombination> {
        let word = |w: &Word| -> Result<ZetaCombination> {
            if w.is_empty() {
                return Ok(ZetaCombination::constant(BigRational::one()));
            }
            let parts = w
                .iter()
                .map(|p| p.iter().map(|&s| values.get(s).copied().ok_or_else(|| Error::Precondition(format!("no value for symbol {}", symbol_name(s))))).sum())
                .collect::<Result<Vec<u32>>>()?;
            Ok(ZetaCombination::zeta(Composition::new(parts)?))
        };
        let mut out = word(&self.unknown)?;
        for (c, w) in &self.basis_terms {
            out.add_scaled(&-c, &word(w)?);
        }
        for (c, p) in &self.rhs_terms {
            let mut t = ZetaCombination::constant(BigRational::one());
            for w in p {
                t = &t * &word(w)?;
            }
            out.add_scaled(&-c, &t);
        }
        Ok(out.normalize())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let terms = |v: Vec<(String, String)>| -> Vec<serde_json::Value> {
            v.into_iter().map(|(c, t)| json!({"coefficient": c, "term": t})).collect()
        };
        json!({
            "unknown": word_name(&self.unknown),
            "basis": terms(self.basis_terms.iter().map(|(c, w)| (format_rational(c), word_name(w))).collect()),
            "lower": terms(self.rhs_terms.iter().map(|(c, p)| (format_rational(c), product_name(p))).collect()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisReport {
    pub length: usize,
    pub relations: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub expected_rank: usize,
    pub basis: Vec<Word>,
    /// True when the basis is the set of unknowns starting with the first symbol.
    pub canonical: bool,
    pub expressions: Vec<Expression>,
}

impl BasisReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "length": self.length,
            "relations": self.relations,
            "unknowns": self.unknowns,
            "rank": self.rank,
            "expected_rank": self.expected_rank,
            "basis": self.basis.iter().map(word_name).collect::<Vec<_>>(),
            "canonical": self.canonical,
            "expressions": self.expressions.iter().map(Expression::to_json_value).collect::<Vec<_>>(),
        })
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Solves the generic length-`l` system for the unknowns that do not start
/// with the first argument. Falls back to the elimination order (and reports a
/// non-canonical basis) when those unknowns are not all determined.
pub fn reduce_to_basis(l: usize) -> Result<BasisReport> {
    if !(2..=5).contains(&l) {
        return Err(Error::Precondition("basis reduction is supported for 2 <= l <= 5".into()));
    }
    let sys = assemble_permutation_system(l, &(0..l).collect::<Vec<_>>())?;
    reduce_system(&sys)
}

pub fn reduce_system(sys: &PermutationSystem) -> Result<BasisReport> {
    let n = sys.unknowns.len();
    let first = *sys.symbols.iter().min().expect("non-empty");
    // preferred pivots first: unknowns not starting with the first symbol
    let mut order: Vec<usize> = (0..n).filter(|&i| sys.unknowns[i][0] != vec![first]).collect();
    let preferred = order.len();
    order.extend((0..n).filter(|&i| sys.unknowns[i][0] == vec![first]));
    let r = sys.rhs_columns.len();
    // augmented rows [M in pivot order | −A]
    let mut rows: Vec<Vec<BigRational>> = (0..sys.matrix.nrows())
        .map(|i| {
            let mut row: Vec<BigRational> = order.iter().map(|&j| sys.matrix.get(i, j).clone()).collect();
            row.extend((0..r).map(|j| -sys.rhs.get(i, j)));
            row
        })
        .collect();
    let pivots = rref(&mut rows, n);
    let rank = pivots.len();
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let canonical = rank == preferred && (0..preferred).all(|c| pivot_cols.contains(&c));
    let basis: Vec<Word> = (0..n).filter(|c| !pivot_cols.contains(c)).map(|c| sys.unknowns[order[c]].clone()).collect();
    let expressions = pivots
        .iter()
        .map(|&(row, c)| {
            let rw = &rows[row];
            Expression {
                unknown: sys.unknowns[order[c]].clone(),
                basis_terms: (0..n)
                    .filter(|j| !pivot_cols.contains(j) && !rw[*j].is_zero())
                    .map(|j| (-&rw[j], sys.unknowns[order[j]].clone()))
                    .collect(),
                rhs_terms: (0..r).filter(|&j| !rw[n + j].is_zero()).map(|j| (-&rw[n + j], sys.rhs_columns[j].clone())).collect(),
            }
        })
        .collect();
    let l = sys.length;
    Ok(BasisReport {
        length: l,
        relations: sys.relations.len(),
        unknowns: n,
        rank,
        expected_rank: factorial(l) - factorial(l - 1),
        basis,
        canonical,
        expressions,
    })
}

/// Reduced row echelon form, pivoting only in the first `ncols` columns.
fn rref(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_two_is_reflection() {
        let s = assemble_permutation_system(2, &[0, 1]).unwrap();
        assert_eq!(s.unknowns.len(), 2);
        assert_eq!(s.rank(), 1);
        let names: Vec<String> = s.rhs_columns.iter().map(product_name).collect();
        assert_eq!(names, vec!["ζ(a)ζ(b)", "ζ(a+b)"]);
    }

    #[test]
    fn length_three_counts() {
        let s = assemble_permutation_system(3, &[0, 1, 2]).unwrap();
        assert_eq!((s.unknowns.len(), s.relations.len()), (6, 12));
        assert_eq!(s.rank(), 4);
        let d = assemble_permutation_system(3, &[0, 1, 1]).unwrap();
        assert_eq!(d.unknowns.len(), 3);
        assert_eq!(d.rank(), 2);
        assert_eq!(assemble_permutation_system(3, &[0, 0, 0]).unwrap().rank(), 1);
        assert!(assemble_permutation_system(1, &[0]).is_err());
    }

    #[test]
    fn three_point_rows_add_nothing() {
        let s = assemble_permutation_system(3, &[0, 1, 2]).unwrap();
        let t = s.with_relations(three_point_relations(&[0, 1, 2]).unwrap()).unwrap();
        assert_eq!(t.relations.len(), s.relations.len() + 6);
        assert_eq!(t.rank(), 4);
    }

    #[test]
    fn basis_of_length_three() {
        let r = reduce_to_basis(3).unwrap();
        assert_eq!((r.rank, r.expected_rank), (4, 4));
        assert!(r.canonical);
        let names: Vec<String> = r.basis.iter().map(word_name).collect();
        assert_eq!(names, vec!["ζ(a,b,c)", "ζ(a,c,b)"]);
    }
}
