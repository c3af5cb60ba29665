//! Dense exact matrices over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    labels: Vec<String>,
    rows: Vec<Vec<BigRational>>,
}

impl ExactMatrix {
    /// An empty matrix with the given column labels (which must be unique).
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::Precondition(format!("duplicate column label {l}")));
            }
        }
        Ok(ExactMatrix { labels, rows: Vec::new() })
    }

    pub fn from_rows(labels: Vec<String>, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let mut m = Self::new(labels)?;
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, row: Vec<BigRational>) -> Result<()> {
        if row.len() != self.labels.len() {
            return Err(Error::Precondition(format!("row has {} entries, matrix has {} columns", row.len(), self.labels.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.rows[r][c]
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// One line of column labels (prefixed by `#`), then one line per row of
    /// whitespace-separated `p/q` entries.
    pub fn to_text(&self) -> String {
        let mut s = format!("# {}\n", self.labels.join("\t"));
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Integer rows with the same row space: each row is scaled by the lcm of its
/// denominators.
fn integer_rows(m: &ExactMatrix) -> Vec<Vec<BigInt>> {
    m.rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
            r.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Exact rank by fraction-free (Bareiss) elimination; the pivot in each column
/// is the entry of smallest magnitude.
pub fn rank(m: &ExactMatrix) -> usize {
    let mut a = integer_rows(m);
    let (nr, nc) = (a.len(), m.ncols());
    let mut r = 0;
    let mut prev = BigInt::from(1);
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).filter(|&i| !a[i][c].is_zero()).min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()))
        else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nr {
            let f = a[i][c].clone();
            let piv = a[r][c].clone();
            for j in c..nc {
                // exact division by the previous pivot keeps entries integral
                let v = (&piv * &a[i][j] - &f * &a[r][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combination::rat;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        let labels = (0..rows[0].len()).map(|i| format!("x{i}")).collect();
        ExactMatrix::from_rows(labels, rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).rank(), 2);
        assert_eq!(m(&[&[2, 0, 1], &[0, 3, 1], &[1, 1, 0]]).rank(), 3);
    }

    #[test]
    fn scaling_and_order_do_not_matter() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10], &[1, 1, 1]]);
        let mut rows: Vec<Vec<BigRational>> = a.rows().to_vec();
        rows.reverse();
        for (i, r) in rows.iter_mut().enumerate() {
            for x in r.iter_mut() {
                *x *= BigRational::new((i as i64 + 2).into(), 3.into());
            }
        }
        let b = ExactMatrix::from_rows(a.labels().to_vec(), rows).unwrap();
        assert_eq!(a.rank(), 3);
        assert_eq!(b.rank(), 3);
    }

    #[test]
    fn text_export() {
        let a = m(&[&[1, -2]]);
        assert_eq!(a.to_text(), "# x0\tx1\n1/1 -2/1\n");
        assert!(ExactMatrix::new(vec!["a".into(), "a".into()]).is_err());
        assert!(m(&[&[1, 2]]).clone().push_row(vec![rat(1)]).is_err());
    }
}
