use alloc::format;
use alloc::string::ToString;
use alloc::vec;

use num_bigint::BigInt;
use num_traits::One;

use super::poly::{MultiPoly, VarOrder};
use crate::{Error, Result};

impl MultiPoly {
    /// Reads the canonical text form written by `Display`.
    ///
    /// Also accepts terms without an explicit coefficient (`x*y^2`) and
    /// arbitrary term order; whitespace is ignored.
    pub fn parse(text: &str, vars: &VarOrder) -> Result<MultiPoly> {
        let compact: alloc::string::String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".to_string()));
        }
        let mut p = MultiPoly::zero(vars);
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut i = 0;
        // split on top-level + and - that follow a term
        while i <= bytes.len() {
            let at_sep =
                i == bytes.len() || (i > start && (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^');
            if at_sep {
                let term = &compact[start..i];
                let t = parse_term(term, vars)?;
                p = &p + &t;
                start = if i < bytes.len() && bytes[i] == b'+' { i + 1 } else { i };
            }
            i += 1;
        }
        Ok(p)
    }
}

fn parse_term(term: &str, vars: &VarOrder) -> Result<MultiPoly> {
    let (sign, body) = match term.as_bytes().first() {
        Some(b'-') => (-BigInt::one(), &term[1..]),
        Some(b'+') => (BigInt::one(), &term[1..]),
        _ => (BigInt::one(), term),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("dangling sign in `{term}`")));
    }
    let mut coeff = sign;
    let mut exps = vec![0u32; vars.len()];
    for (n, factor) in body.split('*').enumerate() {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{term}`")));
        }
        if factor.as_bytes()[0].is_ascii_digit() {
            if n != 0 {
                return Err(Error::Parse(format!("coefficient must lead in `{term}`")));
            }
            let c: BigInt = factor.parse().map_err(|_| Error::Parse(format!("bad coefficient `{factor}`")))?;
            coeff *= c;
            continue;
        }
        let (name, e) = match factor.split_once('^') {
            Some((name, e)) => {
                let e: u32 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                (name, e)
            }
            None => (factor, 1),
        };
        let idx = vars.index_of(name).ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
        exps[idx] += e;
    }
    MultiPoly::from_terms(vars, [(exps, coeff)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_canonical_form() {
        let v = VarOrder::zh(2);
        let p = MultiPoly::parse("1*z1^2*h1*h2 - 2*z1*z2*h1*h2 + 1*z2^2*h1*h2", &v).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(MultiPoly::parse(&p.to_string(), &v).unwrap(), p);
    }

    #[test]
    fn accepts_loose_forms() {
        let v = VarOrder::new(["x", "y"]);
        let p = MultiPoly::parse("-x*y + 3 - y^2", &v).unwrap();
        assert_eq!(p.to_string(), "-1*x*y - 1*y^2 + 3");
        assert_eq!(MultiPoly::parse("0", &v).unwrap(), MultiPoly::zero(&v));
        assert!(MultiPoly::parse("x*q", &v).is_err());
        assert!(MultiPoly::parse("x*2", &v).is_err());
    }
}
