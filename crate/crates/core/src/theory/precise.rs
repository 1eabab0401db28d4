//! Software-float evaluation of the closed forms at 192 bits (about 57
//! decimal digits). Used as an independent reference for the `f64` paths.

use astro_float::{BigFloat, Consts, RoundingMode};

const PRECISION: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

struct Ctx {
    cc: Consts,
}

impl Ctx {
    fn new() -> Self {
        Ctx { cc: Consts::new().expect("astro-float constants cache") }
    }

    fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, PRECISION)
    }

    fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PRECISION, RM, &mut self.cc)
    }

    /// `ln b = -ln(1 - p)` with `p` taken exactly from its binary value.
    fn ln_b(&mut self, p: f64) -> BigFloat {
        let q = self.f(1.0).sub(&self.f(p), PRECISION, RM);
        self.ln(&q).neg()
    }

    fn as_f64(&mut self, x: &BigFloat) -> f64 {
        x.to_string().parse().expect("decimal rendering of a finite BigFloat")
    }
}

/// `gamma` rendered to full working precision.
pub fn gamma_decimal(n: u64, p: f64) -> String {
    let mut ctx = Ctx::new();
    gamma_big(&mut ctx, n, p).to_string()
}

pub fn gamma(n: u64, p: f64) -> f64 {
    let mut ctx = Ctx::new();
    let g = gamma_big(&mut ctx, n, p);
    ctx.as_f64(&g)
}

fn gamma_big(ctx: &mut Ctx, n: u64, p: f64) -> BigFloat {
    let ln_b = ctx.ln_b(p);
    let ln_n = ctx.ln(&BigFloat::from_u64(n, PRECISION));
    let log_b_n = ln_n.div(&ln_b, PRECISION, RM);
    let ln_log_b_n = ctx.ln(&log_b_n);
    let ln_2 = ctx.ln(&ctx.f(2.0));
    let inner = ln_n.sub(&ln_log_b_n, PRECISION, RM).sub(&ln_2, PRECISION, RM);
    inner.mul(&ctx.f(2.0), PRECISION, RM).div(&ln_b, PRECISION, RM)
}

/// `phi(x) = (1 - Delta + x) log_b(1 - Delta + x) + (1 - Delta)(Delta - x)/2`.
pub fn phi(x: f64, delta: f64, p: f64) -> f64 {
    let mut ctx = Ctx::new();
    let ln_b = ctx.ln_b(p);
    let (x, delta, one) = (ctx.f(x), ctx.f(delta), ctx.f(1.0));
    let base = one.sub(&delta, PRECISION, RM).add(&x, PRECISION, RM);
    let first = base.mul(&ctx.ln(&base), PRECISION, RM).div(&ln_b, PRECISION, RM);
    let second = one
        .sub(&delta, PRECISION, RM)
        .mul(&delta.sub(&x, PRECISION, RM), PRECISION, RM)
        .div(&ctx.f(2.0), PRECISION, RM);
    let total = first.add(&second, PRECISION, RM);
    ctx.as_f64(&total)
}
