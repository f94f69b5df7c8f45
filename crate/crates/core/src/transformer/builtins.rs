//! The primitive library: circuit elements, the clocked register, the
//! nondeterministic merge `mix`, and the constant maps `magic` and `abort`.

use super::{Delay, DetTransformer, NDetTransformer, Transformer};
use crate::coeff::{Coeff, Domain};
use crate::error::{Error, Result};
use crate::prefix::{Prefix, PrefixSet};

fn field(name: &str, d: &Domain) -> Result<()> {
    if d.is_field() {
        Ok(())
    } else {
        Err(Error::BadParams {
            name: name.into(),
            reason: format!("needs a field domain, got {d}"),
        })
    }
}

fn letterwise<F>(out: &Domain, p: &Prefix, f: F) -> Prefix
where
    F: Fn(&Coeff) -> Coeff,
{
    Prefix::new_unchecked(out.clone(), p.word().iter().map(f).collect())
}

fn prepend(a: &Coeff, p: &Prefix) -> Prefix {
    let mut word = Vec::with_capacity(p.len() + 1);
    word.push(a.clone());
    word.extend_from_slice(p.word());
    Prefix::new_unchecked(p.domain().clone(), word)
}

/// `M_r(z) = r·z`.
pub fn scale(domain: &Domain, r: Coeff) -> Result<DetTransformer> {
    field("M_r", domain)?;
    domain.check(&r)?;
    let out = domain.clone();
    Ok(DetTransformer::new(format!("M_{}", domain.render(&r)), domain.clone(), domain.clone(), Delay(0), move |p| {
        letterwise(&out, p, |c| r.mul(c).unwrap())
    }))
}

/// `A(z₁, z₂) = z₁ + z₂`.
pub fn adder(domain: &Domain) -> Result<DetTransformer> {
    field("A", domain)?;
    let input = Domain::product(vec![domain.clone(), domain.clone()]);
    let out = domain.clone();
    Ok(DetTransformer::new("A", input, domain.clone(), Delay(0), move |p| {
        letterwise(&out, p, |c| {
            let parts = c.components();
            parts[0].add(&parts[1]).unwrap()
        })
    }))
}

/// `C(z) = (z, z)`.
pub fn copy(domain: &Domain) -> Result<DetTransformer> {
    let out = Domain::product(vec![domain.clone(), domain.clone()]);
    if out.arity() != 2 {
        return Err(Error::BadParams {
            name: "C".into(),
            reason: "cannot copy into a product".into(),
        });
    }
    let dom = out.clone();
    Ok(DetTransformer::new("C", domain.clone(), out, Delay(0), move |p| {
        letterwise(&dom, p, |c| Coeff::tuple(vec![c.clone(), c.clone()]))
    }))
}

/// `D₁(z) = X·z`.
pub fn unit_delay(domain: &Domain) -> Result<DetTransformer> {
    field("D1", domain)?;
    let zero = domain.zero().unwrap();
    Ok(DetTransformer::new("D1", domain.clone(), domain.clone(), Delay(1), move |p| prepend(&zero, p)))
}

/// `z ↦ a + X·z`; defined over any domain.
pub fn cons_a(domain: &Domain, a: Coeff) -> Result<DetTransformer> {
    domain.check(&a)?;
    Ok(DetTransformer::new(
        format!("cons_{}", domain.render(&a)),
        domain.clone(),
        domain.clone(),
        Delay(1),
        move |p| prepend(&a, p),
    ))
}

/// `Succ(z) = z + 1`, which changes only the constant coefficient.
pub fn succ(domain: &Domain) -> Result<DetTransformer> {
    field("succ", domain)?;
    let one = domain.one().unwrap();
    let out = domain.clone();
    Ok(DetTransformer::new("succ", domain.clone(), domain.clone(), Delay(0), move |p| {
        let mut word = p.word().to_vec();
        if let Some(c) = word.first_mut() {
            *c = c.add(&one).unwrap();
        }
        Prefix::new_unchecked(out.clone(), word)
    }))
}

pub fn identity(domain: &Domain) -> DetTransformer {
    DetTransformer::new("id", domain.clone(), domain.clone(), Delay(0), Prefix::clone)
}

/// A clocked register over `(value, enable)` pairs. A load is visible at the
/// tick it happens: `out₀ = en₀ ? in₀ : init`, `out_k = en_k ? in_k : out_{k−1}`.
pub fn register(value: &Domain, init: Coeff) -> Result<DetTransformer> {
    value.check(&init)?;
    let input = Domain::Product(vec![value.clone(), Domain::Gf2].into());
    let out = value.clone();
    Ok(DetTransformer::new("register", input, value.clone(), Delay(0), move |p| {
        let mut state = init.clone();
        let word = p
            .word()
            .iter()
            .map(|c| {
                let parts = c.components();
                if parts[1] == Coeff::Bit(true) {
                    state = parts[0].clone();
                }
                state.clone()
            })
            .collect();
        Prefix::new_unchecked(out.clone(), word)
    }))
}

/// The eager merge underlying [`mix`]: a length-`k+1` word that emits a 1 as
/// soon as the ones seen on the inputs strictly before the current tick
/// outnumber the ones already emitted.
pub fn mix_eager(f: &Prefix, g: &Prefix) -> Prefix {
    let ones = |p: &Prefix, i: usize| usize::from(p.letter(i) == Some(&Coeff::Bit(true)));
    let k = f.len().min(g.len());
    let (mut credit, mut emitted) = (0usize, 0usize);
    let word = (0..=k)
        .map(|j| {
            if j > 0 {
                credit += ones(f, j - 1) + ones(g, j - 1);
            }
            let bit = credit > emitted;
            emitted += usize::from(bit);
            Coeff::Bit(bit)
        })
        .collect();
    Prefix::new_unchecked(Domain::Gf2, word)
}

/// All delays `X^ℓ·e` of the eager merge word `e`, truncated to its length.
pub(crate) fn mix_image(eager: &Prefix) -> PrefixSet {
    let n = eager.len();
    let zero = Coeff::Bit(false);
    let members = (0..=n).map(|shift| {
        let mut word = vec![zero.clone(); shift];
        word.extend_from_slice(&eager.word()[..n - shift]);
        Prefix::new_unchecked(Domain::Gf2, word)
    });
    PrefixSet::from_prefixes(Domain::Gf2, n, members).expect("uniform length")
}

/// Nondeterministic merge of two bit streams into one carrying as many ones
/// as both inputs together. Each output is a delayed copy of the eager merge;
/// every one is emitted at least a tick after the input one that pays for it.
pub fn mix() -> NDetTransformer {
    let input = Domain::Product(vec![Domain::Gf2, Domain::Gf2].into());
    NDetTransformer::new("mix", input, Domain::Gf2, Delay(1), 2, |p| {
        let parts = p.unzip();
        mix_image(&mix_eager(&parts[0], &parts[1]))
    })
}

/// The map with empty images. Every input satisfies its weakest precondition.
pub fn magic(input: &Domain, output: &Domain, delay: Delay) -> NDetTransformer {
    let out = output.clone();
    NDetTransformer::new("magic", input.clone(), output.clone(), delay, 0, move |p| {
        PrefixSet::empty(out.clone(), p.len() + delay.0)
    })
}

/// The map whose images are everything. Only finite output domains.
pub fn abort(input: &Domain, output: &Domain, delay: Delay) -> Result<NDetTransformer> {
    let branching = output.letter_count().ok_or_else(|| Error::NonEnumerable {
        domain: output.to_string(),
    })?;
    let out = output.clone();
    Ok(NDetTransformer::new("abort", input.clone(), output.clone(), delay, branching, move |p| {
        PrefixSet::full(&out, p.len() + delay.0).expect("finite domain")
    }))
}

fn param<'a>(name: &str, params: &[&'a str], i: usize) -> Result<&'a str> {
    params.get(i).copied().ok_or_else(|| Error::BadParams {
        name: name.into(),
        reason: format!("missing parameter {}", i + 1),
    })
}

fn no_more(name: &str, params: &[&str], n: usize) -> Result<()> {
    if params.len() > n {
        return Err(Error::BadParams {
            name: name.into(),
            reason: format!("expected at most {n} parameters, got {}", params.len()),
        });
    }
    Ok(())
}

fn optional_delay(name: &str, params: &[&str]) -> Result<Delay> {
    no_more(name, params, 1)?;
    match params.first() {
        None => Ok(Delay(0)),
        Some(s) => s.parse().map(Delay).map_err(|_| Error::BadParams {
            name: name.into(),
            reason: format!("`{s}` is not a delay"),
        }),
    }
}

/// Looks up a primitive by name. `domain` is the scalar domain the
/// primitive works over; `params` are textual parameters.
///
/// | name | params | delay |
/// |------|--------|-------|
/// | `M_r`, `scale` | `r` | 0 |
/// | `A`, `add` | | 0 |
/// | `C`, `copy` | | 0 |
/// | `D1`, `delay` | | 1 |
/// | `cons_a`, `cons` | `a` | 1 |
/// | `succ` | | 0 |
/// | `id`, `identity` | | 0 |
/// | `register` | `width`, `init` bits | 0 |
/// | `mix` | | 1 |
/// | `magic`, `abort` | optional delay | given |
pub fn builtin(name: &str, domain: &Domain, params: &[&str]) -> Result<Transformer> {
    let t: Transformer = match name {
        "M_r" | "scale" => {
            no_more(name, params, 1)?;
            scale(domain, domain.parse(param(name, params, 0)?)?)?.into()
        }
        "A" | "add" => {
            no_more(name, params, 0)?;
            adder(domain)?.into()
        }
        "C" | "copy" => {
            no_more(name, params, 0)?;
            copy(domain)?.into()
        }
        "D1" | "D₁" | "delay" => {
            no_more(name, params, 0)?;
            unit_delay(domain)?.into()
        }
        "cons_a" | "cons" => {
            no_more(name, params, 1)?;
            cons_a(domain, domain.parse(param(name, params, 0)?)?)?.into()
        }
        "succ" => {
            no_more(name, params, 0)?;
            succ(domain)?.into()
        }
        "id" | "identity" => {
            no_more(name, params, 0)?;
            identity(domain).into()
        }
        "register" => {
            no_more(name, params, 2)?;
            let width: usize = param(name, params, 0)?.parse().map_err(|_| Error::BadParams {
                name: name.into(),
                reason: "width must be a positive integer".into(),
            })?;
            let init = param(name, params, 1).unwrap_or("");
            let init = if init.is_empty() { "0".repeat(width) } else { init.to_string() };
            if width == 0 || init.chars().count() != width || !init.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::BadParams {
                    name: name.into(),
                    reason: format!("init must be {width} bits"),
                });
            }
            let value = Domain::product(vec![Domain::Gf2; width]);
            let bits: Vec<Coeff> = init.chars().map(|c| Coeff::Bit(c == '1')).collect();
            let init = if width == 1 { bits[0].clone() } else { Coeff::tuple(bits) };
            register(&value, init)?.into()
        }
        "mix" => {
            no_more(name, params, 0)?;
            mix().into()
        }
        "magic" => magic(domain, domain, optional_delay(name, params)?).into(),
        "abort" => abort(domain, domain, optional_delay(name, params)?)?.into(),
        _ => return Err(Error::UnknownBuiltin(name.into())),
    };
    Ok(t)
}
