//! Shared helpers for the integration tests: bit words, small prefix sets and
//! randomly tabulated causal transformers over GF(2).
#![allow(dead_code)]

use causal_streams::{Coeff, Delay, Domain, NDetTransformer, Prefix, PrefixSet, Transformer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn bits(s: &str) -> Prefix {
    let word = s.chars().map(|c| Coeff::bit(c == '1')).collect();
    Prefix::new(Domain::Gf2, word).unwrap()
}

pub fn show(p: &Prefix) -> String {
    p.to_strings().concat()
}

pub fn set_of(len: usize, words: &[&str]) -> PrefixSet {
    PrefixSet::from_prefixes(Domain::Gf2, len, words.iter().map(|w| bits(w))).unwrap()
}

pub fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Injective code of a short bit word: the bits behind a leading 1.
fn key(word: &[Coeff]) -> u64 {
    word.iter().fold(1u64, |acc, c| (acc << 1) | c.as_bit().unwrap() as u64)
}

/// Letters allowed at the next output position, given the input prefix the
/// position may depend on and the output so far. Never empty.
fn allowed(seed: u64, input: &[Coeff], output: &[Coeff], deterministic: bool) -> Vec<bool> {
    let h = splitmix(seed ^ splitmix(key(input)) ^ splitmix(key(output).rotate_left(29)));
    if deterministic {
        return vec![h & 1 == 1];
    }
    match h % 8 {
        0 | 1 => vec![false, true],
        2..=4 => vec![false],
        _ => vec![true],
    }
}

/// A tabulated `delay`-causal transformer on GF(2): output letter `j` is
/// chosen from a hashed nonempty subset of {0, 1} that depends on the first
/// `j + 1 - delay` input letters and the earlier output letters.
pub fn table_transformer(seed: u64, delay: usize, deterministic: bool) -> Transformer {
    let branching = if deterministic { 1 } else { 2 };
    let t = NDetTransformer::new(
        format!("table{seed}"),
        Domain::Gf2,
        Domain::Gf2,
        Delay(delay),
        branching,
        move |p: &Prefix| {
            let n = p.len() + delay;
            let mut words: Vec<Vec<Coeff>> = vec![Vec::new()];
            for j in 0..n {
                let seen = (j + 1).saturating_sub(delay).min(p.len());
                let input = &p.word()[..seen];
                words = words
                    .into_iter()
                    .flat_map(|w| {
                        allowed(seed, input, &w, deterministic).into_iter().map(move |b| {
                            let mut w = w.clone();
                            w.push(Coeff::bit(b));
                            w
                        })
                    })
                    .collect();
            }
            let members = words.into_iter().map(|w| Prefix::new(Domain::Gf2, w).unwrap());
            PrefixSet::from_prefixes(Domain::Gf2, n, members).unwrap()
        },
    );
    t.into()
}

/// Each word of length `len` is kept with probability `density`.
pub fn random_set(rng: &mut ChaCha8Rng, len: usize, density: f64) -> PrefixSet {
    let all = PrefixSet::full(&Domain::Gf2, len).unwrap();
    let kept: Vec<Prefix> = all.iter().filter(|_| rng.gen_bool(density)).cloned().collect();
    PrefixSet::from_prefixes(Domain::Gf2, len, kept).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
