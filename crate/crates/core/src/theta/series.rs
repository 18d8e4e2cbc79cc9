use super::coeff::Coeff;

/// Precision marker for series that are exact (finitely supported).
pub const EXACT: i64 = 1 << 40;

/// Truncated series in `q^{1/D}`. Exponents are stored in units of `1/D`.
///
/// `coeffs[k]` is the coefficient of `q^{(lo + k)/D}`; coefficients past the end
/// of `coeffs` and up to `prec` are zero, and nothing is known beyond `prec`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<C> {
    lo: i64,
    coeffs: Vec<C>,
    prec: i64,
}

impl<C: Coeff> QSeries<C> {
    pub fn zero(prec: i64) -> Self {
        QSeries { lo: prec + 1, coeffs: Vec::new(), prec }
    }

    pub fn one() -> Self {
        Self::constant(C::one_coeff())
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(0, vec![c], EXACT)
    }

    /// `c q^{e/D}` known exactly.
    pub fn monomial(e: i64, c: C) -> Self {
        Self::from_coeffs(e, vec![c], EXACT)
    }

    pub fn from_coeffs(lo: i64, coeffs: Vec<C>, prec: i64) -> Self {
        let mut s = QSeries { lo, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let max_len = (self.prec - self.lo + 1).max(0) as usize;
        self.coeffs.truncate(max_len);
        while self.coeffs.last().is_some_and(|c| c.vanishes()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.vanishes());
        match lead {
            None => {
                self.coeffs.clear();
                self.lo = self.prec + 1;
            }
            Some(k) if k > 0 => {
                self.coeffs.drain(..k);
                self.lo += k as i64;
            }
            _ => {}
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent (in units of `1/D`) of the leading term, if nonzero to precision.
    pub fn order(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.lo)
        }
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.first()
    }

    pub fn coeff(&self, e: i64) -> C {
        if e < self.lo {
            return C::zero_coeff();
        }
        self.coeffs.get((e - self.lo) as usize).cloned().unwrap_or_else(C::zero_coeff)
    }

    /// Nonzero coefficients with their exponents.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.vanishes())
            .map(move |(k, c)| (self.lo + k as i64, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::from_coeffs(self.lo, self.coeffs.clone(), self.prec.min(prec))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> QSeries<D> {
        QSeries::from_coeffs(self.lo, self.coeffs.iter().map(f).collect(), self.prec)
    }

    pub fn neg(&self) -> Self {
        QSeries { lo: self.lo, coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), prec: self.prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let lo = self.lo.min(o.lo);
        let hi_self = self.lo + self.coeffs.len() as i64;
        let hi_o = o.lo + o.coeffs.len() as i64;
        let hi = hi_self.max(hi_o).min(prec + 1);
        if hi <= lo {
            return Self::zero(prec);
        }
        let mut coeffs = vec![C::zero_coeff(); (hi - lo) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            let e = self.lo + k as i64;
            if e < hi {
                coeffs[(e - lo) as usize].add_assign(c);
            }
        }
        for (k, c) in o.coeffs.iter().enumerate() {
            let e = o.lo + k as i64;
            if e < hi {
                coeffs[(e - lo) as usize].add_assign(c);
            }
        }
        Self::from_coeffs(lo, coeffs, prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            let p = match (self.order(), o.order()) {
                (None, None) => self.prec + o.prec,
                (None, Some(b)) => self.prec + b,
                (Some(a), None) => o.prec + a,
                _ => unreachable!(),
            };
            return Self::zero(p.min(EXACT));
        }
        let (a, b) = (self.lo, o.lo);
        let prec = (self.prec + b).min(o.prec + a).min(EXACT);
        let lo = a + b;
        let top = (self.coeffs.len() + o.coeffs.len() - 1) as i64;
        let len = top.min(prec - lo + 1).max(0) as usize;
        let mut coeffs = vec![C::zero_coeff(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if i >= len || x.vanishes() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !y.vanishes() {
                    coeffs[i + j].add_assign(&x.mul(y));
                }
            }
        }
        Self::from_coeffs(lo, coeffs, prec)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_coeffs(self.lo, self.coeffs.iter().map(|x| x.mul(c)).collect(), self.prec)
    }

    /// Multiplicative inverse; needs a nonzero series whose leading coefficient
    /// is a unit of the coefficient ring.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coeffs.first()?;
        let inv0 = c0.try_inv()?;
        let a = self.lo;
        let rel = self.prec - a;
        let prec = (-a + rel).min(EXACT);
        if self.coeffs.len() == 1 {
            return Some(Self::from_coeffs(-a, vec![inv0], prec));
        }
        let len = (rel + 1).max(0) as usize;
        let mut g: Vec<C> = Vec::with_capacity(len);
        for k in 0..len {
            if k == 0 {
                g.push(inv0.clone());
                continue;
            }
            let mut s = C::zero_coeff();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                s.add_assign(&self.coeffs[i].mul(&g[k - i]));
            }
            g.push(s.mul(&inv0).neg());
        }
        Some(Self::from_coeffs(-a, g, prec))
    }

    /// Substitutes `q^{1/D} -> q^{k/D}` (exponent rescaling).
    pub fn rescale(&self, k: i64) -> Self {
        let mut coeffs = vec![C::zero_coeff(); ((self.coeffs.len() as i64 - 1).max(0) * k + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        let prec = if self.prec >= EXACT { EXACT } else { self.prec * k + (k - 1) };
        Self::from_coeffs(self.lo * k, coeffs, prec)
    }
}
