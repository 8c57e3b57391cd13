//! Text form of [`SpaceSpec`].
//!
//! ```text
//! space   := term ("&" term)*
//! term    := "L(" num ")" | "Linf" | "Lorentz(" num "," num ")"
//!          | "Orlicz(" young ")" | "LambdaQ(" num "," weight ")"
//!          | "LambdaA(" young "," weight ")" | "Sobolev(" space "," int "," int ")"
//!          | "(" space ")"
//! young   := regime "@0" "," regime "@inf" ["," "splice=" num]   (either order)
//! regime  := "pow(" p ["," alpha ["," gamma]] ")" | "exp(" beta ")"
//!          | "expexp(" beta ")" | "cap(" t0 ")"
//! weight  := segment (";" segment)*
//! segment := [c "*"] "s^" a ["*(" k "+|log s|)^" b] "on (" lo "," hi ")"
//! ```
//! Numbers are decimal floats or `inf`.

use crate::error::{Error, Result};
use crate::norms::{SpaceSpec, Weight, WeightSegment};
use crate::young::{Regime, YoungFn};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        if self.eat("inf") {
            return Ok(f64::INFINITY);
        }
        let r = self.rest();
        let len = r
            .char_indices()
            .take_while(|&(i, c)| {
                c.is_ascii_digit() || c == '.' || ((c == '-' || c == '+') && (i == 0 || matches!(r.as_bytes()[i - 1], b'e' | b'E'))) || c == 'e' || c == 'E'
            })
            .count();
        match r[..len].parse::<f64>() {
            Ok(v) if len > 0 => {
                self.pos += len;
                Ok(v)
            }
            _ => self.err("expected a number"),
        }
    }

    fn integer(&mut self) -> Result<u32> {
        let at = self.pos;
        let v = self.number()?;
        if v.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&v) {
            self.pos = at;
            return self.err("expected a nonnegative integer");
        }
        Ok(v as u32)
    }

    fn space(&mut self) -> Result<SpaceSpec> {
        let mut s = self.term()?;
        while self.eat("&") {
            let r = self.term()?;
            s = SpaceSpec::intersect(s, r);
        }
        Ok(s)
    }

    fn term(&mut self) -> Result<SpaceSpec> {
        self.skip_ws();
        if self.eat("(") {
            let s = self.space()?;
            self.expect(")")?;
            return Ok(s);
        }
        if self.eat("Linf") {
            return Ok(SpaceSpec::linf());
        }
        if self.eat("Lorentz(") {
            let p = self.number()?;
            self.expect(",")?;
            let q = self.number()?;
            self.expect(")")?;
            return Ok(SpaceSpec::Lorentz { p, q });
        }
        if self.eat("LambdaQ(") {
            let q = self.number()?;
            self.expect(",")?;
            let weight = self.weight()?;
            self.expect(")")?;
            return Ok(SpaceSpec::LambdaQ { q, weight });
        }
        if self.eat("LambdaA(") {
            let young = self.young()?;
            self.expect(",")?;
            let weight = self.weight()?;
            self.expect(")")?;
            return Ok(SpaceSpec::LambdaA { young, weight });
        }
        if self.eat("Orlicz(") {
            let young = self.young()?;
            self.expect(")")?;
            return Ok(SpaceSpec::Orlicz { young });
        }
        if self.eat("Sobolev(") {
            let base = self.space()?;
            self.expect(",")?;
            let n = self.integer()?;
            self.expect(",")?;
            let m = self.integer()?;
            self.expect(")")?;
            return Ok(SpaceSpec::SobolevLocal { base: Box::new(base), n, m });
        }
        if self.eat("L(") {
            let p = self.number()?;
            self.expect(")")?;
            return Ok(SpaceSpec::Lebesgue { p });
        }
        self.err("expected a space: L, Linf, Lorentz, Orlicz, LambdaQ, LambdaA, Sobolev or `(`")
    }

    fn regime(&mut self) -> Result<Regime> {
        self.skip_ws();
        if self.eat("pow(") {
            let p = self.number()?;
            let alpha = if self.eat(",") { self.number()? } else { 0.0 };
            let gamma = if self.eat(",") { self.number()? } else { 0.0 };
            self.expect(")")?;
            return Ok(Regime::PowerLog { p, alpha, gamma });
        }
        if self.eat("expexp(") {
            let beta = self.number()?;
            self.expect(")")?;
            return Ok(Regime::DoubleExpPower { beta });
        }
        if self.eat("exp(") {
            let beta = self.number()?;
            self.expect(")")?;
            return Ok(Regime::ExpPower { beta });
        }
        if self.eat("cap(") {
            let t0 = self.number()?;
            self.expect(")")?;
            return Ok(Regime::InfiniteCap { t0 });
        }
        self.err("expected a regime: pow, exp, expexp or cap")
    }

    /// A regime and whether it is tagged `@0`.
    fn tagged_regime(&mut self) -> Result<(Regime, bool)> {
        let r = self.regime()?;
        if self.eat("@0") {
            Ok((r, true))
        } else if self.eat("@inf") {
            Ok((r, false))
        } else {
            self.err("expected `@0` or `@inf`")
        }
    }

    fn young(&mut self) -> Result<YoungFn> {
        let start = self.pos;
        let (a, a0) = self.tagged_regime()?;
        self.expect(",")?;
        let (b, b0) = self.tagged_regime()?;
        if a0 == b0 {
            self.pos = start;
            return self.err("a Young function needs one `@0` and one `@inf` regime");
        }
        let (z, i) = if a0 { (a, b) } else { (b, a) };
        let mut splice = 1.0;
        let save = self.pos;
        if self.eat(",") {
            if self.eat("splice=") {
                splice = self.number()?;
            } else {
                self.pos = save;
            }
        }
        YoungFn::with_splice(z, i, splice).or_else(|e| {
            self.pos = start;
            self.err(e.to_string())
        })
    }

    fn segment(&mut self) -> Result<WeightSegment> {
        self.skip_ws();
        let coef = if self.rest().starts_with("s^") { 1.0 } else {
            let c = self.number()?;
            self.expect("*")?;
            c
        };
        self.expect("s^")?;
        let power = self.number()?;
        let (mut log_offset, mut log_power) = (1.0, 0.0);
        if self.eat("*(") {
            log_offset = self.number()?;
            self.expect("+|log s|)^")?;
            log_power = self.number()?;
        }
        self.expect("on")?;
        self.expect("(")?;
        let lo = self.number()?;
        self.expect(",")?;
        let hi = self.number()?;
        self.expect(")")?;
        Ok(WeightSegment { lo, hi, coef, power, log_power, log_offset })
    }

    fn weight(&mut self) -> Result<Weight> {
        let start = self.pos;
        let mut segs = vec![self.segment()?];
        while self.eat(";") {
            segs.push(self.segment()?);
        }
        Weight::new(segs).or_else(|e| {
            self.pos = start;
            self.err(e.to_string())
        })
    }
}

/// Parses the text form of a space.
pub fn parse_space(src: &str) -> Result<SpaceSpec> {
    let mut p = Parser { src, pos: 0 };
    let s = p.space()?;
    p.skip_ws();
    if p.pos != src.len() {
        return p.err("unexpected trailing input");
    }
    Ok(s)
}

/// Parses `young` on its own, e.g. `pow(2)@0,exp(1)@inf`.
pub fn parse_young(src: &str) -> Result<YoungFn> {
    let mut p = Parser { src, pos: 0 };
    let y = p.young()?;
    p.skip_ws();
    if p.pos != src.len() {
        return p.err("unexpected trailing input");
    }
    Ok(y)
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x}")
    }
}

pub fn render_regime(r: &Regime) -> String {
    match *r {
        Regime::PowerLog { p, alpha, gamma } => {
            if gamma != 0.0 {
                format!("pow({},{},{})", num(p), num(alpha), num(gamma))
            } else if alpha != 0.0 {
                format!("pow({},{})", num(p), num(alpha))
            } else {
                format!("pow({})", num(p))
            }
        }
        Regime::ExpPower { beta } => format!("exp({})", num(beta)),
        Regime::DoubleExpPower { beta } => format!("expexp({})", num(beta)),
        Regime::InfiniteCap { t0 } => format!("cap({})", num(t0)),
    }
}

pub fn render_young(y: &YoungFn) -> String {
    let mut s = format!("{}@0,{}@inf", render_regime(&y.near_zero()), render_regime(&y.near_infinity()));
    if y.splice_point() != 1.0 {
        s += &format!(",splice={}", num(y.splice_point()));
    }
    s
}

fn render_segment(g: &WeightSegment) -> String {
    let mut s = String::new();
    if g.coef != 1.0 {
        s += &format!("{}*", num(g.coef));
    }
    s += &format!("s^{}", num(g.power));
    if g.log_power != 0.0 {
        s += &format!("*({}+|log s|)^{}", num(g.log_offset), num(g.log_power));
    }
    s + &format!(" on ({},{})", num(g.lo), num(g.hi))
}

pub fn render_weight(w: &Weight) -> String {
    w.segments().iter().map(render_segment).collect::<Vec<_>>().join("; ")
}

fn render_term(s: &SpaceSpec) -> String {
    match s {
        SpaceSpec::Intersect { .. } => format!("({})", render_space(s)),
        _ => render_space(s),
    }
}

/// Inverse of [`parse_space`].
pub fn render_space(s: &SpaceSpec) -> String {
    match s {
        SpaceSpec::Lebesgue { p } if p.is_infinite() => "Linf".into(),
        SpaceSpec::Lebesgue { p } => format!("L({})", num(*p)),
        SpaceSpec::Lorentz { p, q } => format!("Lorentz({},{})", num(*p), num(*q)),
        SpaceSpec::Orlicz { young } => format!("Orlicz({})", render_young(young)),
        SpaceSpec::LambdaQ { q, weight } => format!("LambdaQ({},{})", num(*q), render_weight(weight)),
        SpaceSpec::LambdaA { young, weight } => format!("LambdaA({},{})", render_young(young), render_weight(weight)),
        SpaceSpec::Intersect { left, right } => format!("{} & {}", render_space(left), render_term(right)),
        SpaceSpec::SobolevLocal { base, n, m } => format!("Sobolev({},{n},{m})", render_space(base)),
    }
}
