//! Truncated power series in a central variable `t` with coefficients in a
//! noncommutative presentation, and their two-variable analogue.

use crate::coeff::QRat;
use crate::error::{Error, Result};
use crate::ncalg::{NCExpr, RewriteSystem};

fn factorial(k: usize) -> QRat {
    (1..=k as i64).fold(QRat::one(), |acc, i| acc * QRat::int(i))
}

/// `c₀ + c₁t + … + c_N t^N + O(t^{N+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries {
    coeffs: Vec<NCExpr>,
}

impl TSeries {
    pub fn from_coeffs(coeffs: Vec<NCExpr>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Usage("a series needs at least one coefficient".into()));
        }
        Ok(TSeries { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        TSeries { coeffs: vec![NCExpr::zero(); order + 1] }
    }

    pub fn constant(c: NCExpr, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `Σ_k (x t)^k / k!`.
    pub fn exp(x: &NCExpr, order: usize, sys: &RewriteSystem) -> Result<Self> {
        let mut coeffs = vec![NCExpr::one()];
        let mut pow = NCExpr::one();
        for k in 1..=order {
            pow = sys.multiply(&pow, x)?;
            coeffs.push(pow.scale(&factorial(k).inv()?));
        }
        Ok(TSeries { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &NCExpr {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[NCExpr] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(NCExpr::is_zero)
    }

    pub fn truncate(&self, order: usize) -> TSeries {
        TSeries { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        let n = self.order().min(other.order());
        TSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn sub(&self, other: &TSeries) -> TSeries {
        self.add(&other.scale(&-QRat::one()))
    }

    pub fn scale(&self, c: &QRat) -> TSeries {
        TSeries { coeffs: self.coeffs.iter().map(|e| e.scale(c)).collect() }
    }

    /// Multiplies every coefficient on the left by `e`.
    pub fn left_mul(&self, e: &NCExpr, sys: &RewriteSystem) -> Result<TSeries> {
        let coeffs = self.coeffs.iter().map(|c| sys.multiply(e, c)).collect::<Result<_>>()?;
        Ok(TSeries { coeffs })
    }

    pub fn mul(&self, other: &TSeries, sys: &RewriteSystem) -> Result<TSeries> {
        let n = self.order().min(other.order());
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut c = NCExpr::zero();
            for j in 0..=k {
                c = c + sys.multiply(&self.coeffs[j], &other.coeffs[k - j])?;
            }
            coeffs.push(c);
        }
        Ok(TSeries { coeffs })
    }

    /// `d/dt`; one order of accuracy is lost.
    pub fn derivative(&self) -> TSeries {
        if self.order() == 0 {
            return TSeries::zero(0);
        }
        let coeffs = (1..=self.order()).map(|k| self.coeffs[k].scale(&QRat::int(k as i64))).collect();
        TSeries { coeffs }
    }

    /// `f(c t)`.
    pub fn rescale(&self, c: &QRat) -> Result<TSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, e)| Ok(e.scale(&c.pow(k as i64)?)))
            .collect::<Result<_>>()?;
        Ok(TSeries { coeffs })
    }

    pub fn reduce(&self, sys: &RewriteSystem) -> Result<TSeries> {
        let coeffs = self.coeffs.iter().map(|c| sys.reduce(c)).collect::<Result<_>>()?;
        Ok(TSeries { coeffs })
    }

    /// Two-sided inverse, given an inverse `inv0` of the constant term.
    pub fn inverse(&self, inv0: &NCExpr, sys: &RewriteSystem) -> Result<TSeries> {
        let one = NCExpr::one();
        if sys.multiply(&self.coeffs[0], inv0)? != one || sys.multiply(inv0, &self.coeffs[0])? != one {
            return Err(Error::Inconsistent("constant term is not inverted by the given element".into()));
        }
        // Right inverse: d_k = -inv0 Σ_{j≥1} c_j d_{k-j}.
        let mut d = vec![sys.reduce(inv0)?];
        for k in 1..=self.order() {
            let mut acc = NCExpr::zero();
            for j in 1..=k {
                acc = acc + sys.multiply(&self.coeffs[j], &d[k - j])?;
            }
            d.push(sys.multiply(inv0, &acc)?.scale(&-QRat::one()));
        }
        let inv = TSeries { coeffs: d };
        let id = TSeries::constant(one, self.order());
        if inv.mul(self, sys)? != id {
            return Err(Error::Inconsistent("right inverse is not a left inverse".into()));
        }
        Ok(inv)
    }
}

/// Which variable of a two-variable series a one-variable series lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    T,
    TPrime,
}

/// `Σ c_ij t^i t'^j` for `i, j ≤ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries {
    coeffs: Vec<Vec<NCExpr>>,
}

impl BiSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize, j: usize) -> &NCExpr {
        &self.coeffs[i][j]
    }

    /// `f(u) g(v)` for one-variable series in distinct variables.
    pub fn outer(f: &TSeries, fv: Var, g: &TSeries, gv: Var, sys: &RewriteSystem) -> Result<BiSeries> {
        if fv == gv {
            return Err(Error::Usage("outer product needs two distinct variables".into()));
        }
        let n = f.order().min(g.order());
        let mut coeffs = vec![vec![NCExpr::zero(); n + 1]; n + 1];
        for (i, row) in coeffs.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                let (fi, gi) = if fv == Var::T { (i, j) } else { (j, i) };
                *c = sys.multiply(f.coeff(fi), g.coeff(gi))?;
            }
        }
        Ok(BiSeries { coeffs })
    }

    /// `exp((a t + b t') x)`.
    pub fn exp_linear(a: &QRat, b: &QRat, x: &NCExpr, order: usize, sys: &RewriteSystem) -> Result<BiSeries> {
        let mut pows = vec![NCExpr::one()];
        for k in 1..=2 * order {
            pows.push(sys.multiply(&pows[k - 1], x)?);
        }
        let mut coeffs = vec![vec![NCExpr::zero(); order + 1]; order + 1];
        for (i, row) in coeffs.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                let s = a.pow(i as i64)? * b.pow(j as i64)? * (factorial(i) * factorial(j)).inv()?;
                *c = pows[i + j].scale(&s);
            }
        }
        Ok(BiSeries { coeffs })
    }

    pub fn mul(&self, other: &BiSeries, sys: &RewriteSystem) -> Result<BiSeries> {
        let n = self.order().min(other.order());
        let mut coeffs = vec![vec![NCExpr::zero(); n + 1]; n + 1];
        for (i, row) in coeffs.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                for a in 0..=i {
                    for b in 0..=j {
                        *c = &*c + &sys.multiply(&self.coeffs[a][b], &other.coeffs[i - a][j - b])?;
                    }
                }
            }
        }
        Ok(BiSeries { coeffs })
    }

    pub fn sub(&self, other: &BiSeries) -> BiSeries {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|i| (0..=n).map(|j| &self.coeffs[i][j] - &other.coeffs[i][j]).collect()).collect();
        BiSeries { coeffs }
    }

    pub fn reduce(&self, sys: &RewriteSystem) -> Result<BiSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(|c| sys.reduce(c)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Ok(BiSeries { coeffs })
    }

    /// First nonzero coefficient in `(i, j)` order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &NCExpr)> {
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    return Some((i, j, c));
                }
            }
        }
        None
    }
}
