use super::{PadicError, PadicNumber};

impl PadicNumber {
    /// `exp_p(x) = sum x^n / n!`, defined for `|x|_p <= 1/p`.
    ///
    /// Terms are added until `n (ord x - 1/(p-1))`, a lower bound for every
    /// later term valuation, passes `N + g`.
    pub fn exp(&self) -> Result<PadicNumber, PadicError> {
        let ctx = self.ctx();
        let Some(v) = self.valuation() else {
            return Ok(PadicNumber::one(ctx));
        };
        if v < 1 {
            return Err(PadicError::DomainError(format!(
                "exp_p needs |x|_p <= 1/p, got valuation {v}"
            )));
        }
        let p = ctx.p() as i64;
        let budget = (ctx.precision() + ctx.guard()) as i64;
        let mut terms = vec![PadicNumber::one(ctx)];
        let mut term = PadicNumber::one(ctx);
        let mut n: i64 = 1;
        // n * (v (p - 1) - 1) > budget * (p - 1)
        while n * (v * (p - 1) - 1) <= budget * (p - 1) {
            term = term.mul(self).div(&PadicNumber::from_i64(n, ctx))?;
            terms.push(term.clone());
            n += 1;
        }
        PadicNumber::sum(ctx, &terms)
    }

    /// `log_p(x) = sum (-1)^(n+1) (x - 1)^n / n`, defined for `|x - 1|_p < 1`.
    pub fn log(&self) -> Result<PadicNumber, PadicError> {
        let ctx = self.ctx();
        let y = self.sub(&PadicNumber::one(ctx))?;
        let Some(v) = y.valuation() else {
            return Ok(PadicNumber::zero(ctx));
        };
        if v < 1 {
            return Err(PadicError::DomainError(
                "log_p needs |x - 1|_p < 1".to_string(),
            ));
        }
        let budget = (ctx.precision() + ctx.guard()) as i64;
        let mut terms = Vec::new();
        let mut power = PadicNumber::one(ctx);
        let mut n: i64 = 1;
        loop {
            // n v - floor(log_p n) bounds every remaining term valuation
            if n * v - ilog(n, ctx.p()) > budget {
                break;
            }
            power = power.mul(&y);
            let mut t = power.div(&PadicNumber::from_i64(n, ctx))?;
            if n % 2 == 0 {
                t = t.neg();
            }
            terms.push(t);
            n += 1;
        }
        PadicNumber::sum(ctx, &terms)
    }
}

fn ilog(n: i64, p: u64) -> i64 {
    (n as u64).ilog(p) as i64
}
