//! Parsing of family specs, codes, and numeric arguments.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use qwe_core::states::{StabilizerGroup, StateFamily};
use qwe_core::{Error, Result};
use std::path::Path;
use std::str::FromStr;

/// Family specs: `product-zero`, `bell-pairs`, `ghz[:e]`, `line-graph`,
/// `cycle-graph[:e]`, `dicke:e`, `dicke-half`, `w`, `ame6`,
/// `superposition:p`, `mixture:p`, `two-design`, `maximally-mixed`.
pub fn parse_family(spec: &str, n: usize) -> Result<StateFamily> {
    let norm = spec.trim().to_lowercase().replace('_', "-");
    let (head, arg) = match norm.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (norm.as_str(), None),
    };
    let int_arg = |default: usize| -> Result<usize> {
        match arg {
            None => Ok(default),
            Some(a) => a
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer parameter in {spec:?}"))),
        }
    };
    let float_arg = || -> Result<f64> {
        arg.ok_or_else(|| Error::Parse(format!("{head} needs a parameter, e.g. {head}:0.5")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad parameter in {spec:?}")))
    };
    match head {
        "product-zero" | "product" => Ok(StateFamily::ProductZero),
        "bell-pairs" => Ok(StateFamily::BellPairs),
        "ghz" => Ok(StateFamily::Ghz {
            entangled: int_arg(n)?,
        }),
        "line-graph" | "line" => Ok(StateFamily::LineGraph),
        "cycle-graph" | "cycle" => Ok(StateFamily::CycleGraph {
            entangled: int_arg(n)?,
        }),
        "dicke" => Ok(StateFamily::Dicke {
            excitations: int_arg(usize::MAX).and_then(|e| {
                if e == usize::MAX {
                    Err(Error::Parse("dicke needs :e, or use dicke-half / w".into()))
                } else {
                    Ok(e)
                }
            })?,
        }),
        "dicke-half" => Ok(StateFamily::Dicke { excitations: n / 2 }),
        "w" => Ok(StateFamily::Dicke { excitations: 1 }),
        "ame6" => Ok(StateFamily::Ame6),
        "superposition" => Ok(StateFamily::Superposition { p: float_arg()? }),
        "mixture" => Ok(StateFamily::Mixture { p: float_arg()? }),
        "two-design" | "two-design-average" => Ok(StateFamily::TwoDesignAverage),
        "maximally-mixed" | "mixed" => Ok(StateFamily::MaximallyMixed),
        other => Err(Error::Parse(format!("unknown family {other:?}"))),
    }
}

/// A code argument: the built-in name `steane`, or a path to a `.stab` text
/// file (one generator per line) or a JSON bitmask file.
pub fn parse_code(spec: &str) -> Result<StabilizerGroup> {
    if spec.eq_ignore_ascii_case("steane") {
        return Ok(StabilizerGroup::steane());
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read code file {spec:?}: {e}")))?;
    if spec.ends_with(".json") {
        let repr: qwe_core::states::stabilizer::StabilizerGroupRepr =
            serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("bad code JSON {spec:?}: {e}")))?;
        StabilizerGroup::from_repr(&repr)
    } else {
        StabilizerGroup::from_text(&text)
    }
}

/// Decimal string → exact rational (keeps denominators small: 0.01 → 1/100).
pub fn parse_decimal_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.contains('/') {
        return BigRational::from_str(s)
            .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (
            m,
            e.parse::<i32>()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?,
        ),
        None => (s, 0),
    };
    let negative = mantissa.starts_with('-');
    let digits = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("bad decimal {s:?}")));
    }
    let joined = format!("{int_part}{frac_part}");
    let num = num_bigint_parse(&joined)?;
    let mut value = BigRational::new(num, num_bigint_parse("1")?);
    let shift = exp - frac_part.len() as i32;
    let ten = BigRational::new(num_bigint_parse("10")?, num_bigint_parse("1")?);
    if shift > 0 {
        for _ in 0..shift {
            value *= &ten;
        }
    } else {
        for _ in 0..(-shift) {
            value /= &ten;
        }
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

fn num_bigint_parse(s: &str) -> Result<BigInt> {
    if s.is_empty() {
        return Ok(BigInt::zero());
    }
    s.parse()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(
            parse_family("dicke-half", 52).unwrap(),
            StateFamily::Dicke { excitations: 26 }
        );
        assert_eq!(
            parse_family("ghz:3", 6).unwrap(),
            StateFamily::Ghz { entangled: 3 }
        );
        assert_eq!(parse_family("ghz", 6).unwrap(), StateFamily::Ghz { entangled: 6 });
        assert_eq!(parse_family("two-design", 9).unwrap(), StateFamily::TwoDesignAverage);
        assert!(parse_family("nope", 4).is_err());
    }

    #[test]
    fn decimals() {
        let r = parse_decimal_rational("0.01").unwrap();
        assert_eq!(r, BigRational::new(1.into(), 100.into()));
        let r = parse_decimal_rational("1e-4").unwrap();
        assert_eq!(r, BigRational::new(1.into(), 10_000.into()));
        let r = parse_decimal_rational("-2.5").unwrap();
        assert_eq!(r, BigRational::new((-5).into(), 2.into()));
        let r = parse_decimal_rational("3/7").unwrap();
        assert_eq!(r, BigRational::new(3.into(), 7.into()));
    }
}
