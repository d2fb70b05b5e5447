//! Exact arithmetic in the cyclotomic field `Q(ζ_n) = Q[x]/Φ_n(x)`.

use num::{BigInt, BigRational, One, Signed, Zero};

/// The field `Q(ζ_n)`, stored as reduction tables for powers of `x`.
#[derive(Clone, Debug)]
pub struct RootRing {
    n: usize,
    degree: usize,
    // powers[k] = x^k mod Φ_n for k < 2n
    powers: Vec<Vec<i64>>,
}

/// An element `Σ q_k ζ^k` with `k < φ(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootElem(Vec<BigRational>);

impl RootElem {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = den[dl - 1];
    let mut q = vec![0; num.len() + 1 - dl];
    for k in (0..q.len()).rev() {
        let c = rem[k + dl - 1] / lead;
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        num = poly_divexact(&num, &cyclotomic_polynomial(d));
    }
    num
}

impl RootRing {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "root ring modulus must be positive");
        let phi = cyclotomic_polynomial(n);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(2 * n);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        if degree == 0 {
            cur = vec![];
        }
        for _ in 0..2 * n {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic Φ_n
            let mut next = vec![0i64; degree];
            let top = if degree == 0 { 0 } else { cur[degree - 1] };
            for k in (1..degree).rev() {
                next[k] = cur[k - 1];
            }
            for k in 0..degree {
                next[k] -= top * phi[k];
            }
            cur = next;
        }
        RootRing { n, degree, powers }
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn zero(&self) -> RootElem {
        RootElem(vec![BigRational::zero(); self.degree])
    }

    pub fn one(&self) -> RootElem {
        self.zeta(0)
    }

    pub fn from_rational(&self, q: BigRational) -> RootElem {
        let mut v = self.zero().0;
        v[0] = q;
        RootElem(v)
    }

    /// `ζ_n^k`.
    pub fn zeta(&self, k: usize) -> RootElem {
        RootElem(
            self.powers[k % self.n]
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self, a: &RootElem) -> bool {
        a.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, a: &RootElem, b: &RootElem) -> RootElem {
        RootElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &RootElem, b: &RootElem) -> RootElem {
        RootElem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &RootElem) -> RootElem {
        RootElem(a.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &RootElem, q: &BigRational) -> RootElem {
        RootElem(a.0.iter().map(|x| x * q).collect())
    }

    pub fn mul(&self, a: &RootElem, b: &RootElem) -> RootElem {
        let mut out = vec![BigRational::zero(); self.degree];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, &c) in self.powers[i + j].iter().enumerate() {
                    if c != 0 {
                        out[k] += &xy * BigRational::from_integer(BigInt::from(c));
                    }
                }
            }
        }
        RootElem(out)
    }

    /// `ζ^k · a`.
    pub fn mul_zeta(&self, a: &RootElem, k: usize) -> RootElem {
        self.mul(a, &self.zeta(k))
    }

    /// Multiplicative inverse, by solving the linear system of
    /// multiplication by `a` over `Q`.
    pub fn inv(&self, a: &RootElem) -> Option<RootElem> {
        if self.is_zero(a) {
            return None;
        }
        let d = self.degree;
        // column j = a * x^j
        let cols: Vec<RootElem> = (0..d).map(|j| self.mul(a, &self.zeta(j))).collect();
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.0[i].clone()).collect();
                row.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x /= &p;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Some(RootElem(m.into_iter().map(|mut r| r.pop().unwrap()).collect()))
    }

    pub fn div(&self, a: &RootElem, b: &RootElem) -> Option<RootElem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `Some(k)` if `a = ζ^k`.
    pub fn as_root_of_unity(&self, a: &RootElem) -> Option<usize> {
        (0..self.n).find(|&k| self.zeta(k) == *a)
    }

    /// `a` as a rational number, if it lies in `Q`.
    pub fn as_rational(&self, a: &RootElem) -> Option<BigRational> {
        if a.0.iter().skip(1).all(Zero::is_zero) {
            Some(a.0.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn is_negative_rational(&self, a: &RootElem) -> bool {
        self.as_rational(a).is_some_and(|q| q.is_negative())
    }
}

/// Reduced row echelon form over the field; returns pivot columns.
pub fn row_reduce(ring: &RootRing, rows: &mut Vec<Vec<RootElem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !ring.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = ring.inv(&rows[r][c]).expect("nonzero pivot");
        rows[r] = rows[r].iter().map(|x| ring.mul(x, &inv)).collect();
        for i in 0..rows.len() {
            if i != r && !ring.is_zero(&rows[i][c]) {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = ring.sub(x, &ring.mul(&f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{ x : M x = 0 }` for the matrix with the given rows.
pub fn nullspace(ring: &RootRing, rows: &[Vec<RootElem>], ncols: usize) -> Vec<Vec<RootElem>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(ring, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ring.zero(); ncols];
            v[f] = ring.one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = ring.neg(&row[f]);
            }
            v
        })
        .collect()
}
