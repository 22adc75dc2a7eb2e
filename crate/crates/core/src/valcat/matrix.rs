//! Dense matrices over arbitrary-precision rationals with exact Gaussian
//! elimination. Entries stay in lowest terms with positive denominators
//! because the rational type normalizes on construction.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix({}x{})[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == width), "ragged rows");
        RatMatrix {
            rows: height,
            cols: width,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience for literals in tests and fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        self.data[r * self.cols + c] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(
            self.cols, other.rows,
            "inner dimensions do not match: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let left = self.get(r, k);
                if left.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = left * other.get(k, c);
                    if !add.is_zero() {
                        let cell = out.get(r, c) + add;
                        out.set(r, c, cell);
                    }
                }
            }
        }
        out
    }

    /// The contiguous block of `width` columns starting at `start`.
    pub fn column_block(&self, start: usize, width: usize) -> RatMatrix {
        self.select_columns(&(start..start + width).collect::<Vec<_>>())
    }

    pub fn select_columns(&self, columns: &[usize]) -> RatMatrix {
        let mut out = Self::zero(self.rows, columns.len());
        for (c_out, &c_in) in columns.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, c_out, self.get(r, c_in).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns, by exact rational
    /// elimination with first-nonzero pivoting, so the result is
    /// deterministic.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pivot_row) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, pivot_row);
            let pivot = m.get(row, col).clone();
            for c in col..m.cols {
                let scaled = m.get(row, c) / &pivot;
                m.set(row, c, scaled);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for c in col..m.cols {
                        let updated = m.get(r, c) - &factor * m.get(row, c);
                        m.set(r, c, updated);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self.get(r, c).is_one()
                    } else {
                        self.get(r, c).is_zero()
                    }
                })
            })
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn neg(&self) -> RatMatrix {
        let mut out = self.clone();
        for cell in &mut out.data {
            *cell = -cell.clone();
        }
        out
    }
}

/// Parses "a/b" or a plain integer string into a normalized rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((numerator, denominator)) = text.split_once('/') {
        let n: BigInt = numerator.trim().parse().ok()?;
        let d: BigInt = denominator.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        let n: BigInt = text.parse().ok()?;
        Some(Rational::from_integer(n))
    }
}

/// Renders a rational as "a/b", or just "a" for integers, always with a
/// positive denominator.
pub fn render_rational(value: &Rational) -> String {
    debug_assert!(value.denom().is_positive());
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rank by exhaustive minor expansion, independent of elimination.
    fn rank_by_minors(m: &RatMatrix) -> usize {
        fn determinant(m: &RatMatrix, rows: &[usize], cols: &[usize]) -> Rational {
            if rows.is_empty() {
                return Rational::one();
            }
            let mut total = Rational::zero();
            let r = rows[0];
            for (k, &c) in cols.iter().enumerate() {
                let sub_rows = &rows[1..];
                let sub_cols: Vec<usize> = cols
                    .iter()
                    .copied()
                    .filter(|&other| other != c)
                    .collect();
                let minor = determinant(m, sub_rows, &sub_cols);
                let signed = if k % 2 == 0 { minor } else { -minor };
                total = total + m.get(r, c) * signed;
            }
            total
        }
        use itertools::Itertools;
        let max = m.rows().min(m.cols());
        for size in (1..=max).rev() {
            for rows in (0..m.rows()).combinations(size) {
                for cols in (0..m.cols()).combinations(size) {
                    if !determinant(m, &rows, &cols).is_zero() {
                        return size;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn parse_and_render_round_trip() {
        for text in ["0", "3", "-5", "1/2", "-7/3"] {
            let value = parse_rational(text).unwrap();
            assert_eq!(render_rational(&value), text);
        }
        // normalization: lowest terms, positive denominator
        assert_eq!(render_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(render_rational(&parse_rational("1/-2").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn multiplication_against_hand_values() {
        let a = RatMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let b = RatMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), RatMatrix::from_i64_rows(&[&[2, 1], &[4, 3]]));
        assert!(a.mul(&RatMatrix::identity(2)) == a);
    }

    #[test]
    fn rref_finds_pivots_exactly() {
        let m = RatMatrix::from_i64_rows(&[&[2, 4, 1], &[1, 2, 0], &[0, 0, 3]]);
        let (reduced, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(
            reduced,
            RatMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 0, 1], &[0, 0, 0]])
        );
    }

    #[test]
    fn rank_agrees_with_minor_expansion() {
        let samples = [
            RatMatrix::from_i64_rows(&[&[1, 0], &[0, 1]]),
            RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]),
            RatMatrix::from_i64_rows(&[&[-1, -1], &[1, 0], &[0, 1], &[0, 0]]),
            RatMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]),
            RatMatrix::zero(3, 2),
        ];
        for m in samples {
            assert_eq!(m.rank(), rank_by_minors(&m), "rank mismatch on {m:?}");
        }
    }

    #[test]
    fn fractional_elimination_is_exact() {
        let m = RatMatrix::from_rows(vec![
            vec![parse_rational("1/3").unwrap(), parse_rational("1/6").unwrap()],
            vec![parse_rational("2/3").unwrap(), parse_rational("1/3").unwrap()],
        ]);
        // second row is twice the first
        assert_eq!(m.rank(), 1);
    }
}
