//! Words over {a, b, B} (B = b⁻¹) and their geodesic normal forms in
//! PSL₂(ℤ) = ⟨a, b | a² = b³ = 1⟩.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    /// b⁻¹
    Bi,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::A,
            Letter::B => Letter::Bi,
            Letter::Bi => Letter::B,
        }
    }

    pub fn is_a(self) -> bool {
        self == Letter::A
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::Bi => 'B',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("illegal character {ch:?} at position {pos}")]
    IllegalChar { ch: char, pos: usize },
}

/// An arbitrary word; no reduction is implied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Accepts a/A, b, B and the spellings `b^-1` and `b-` for B; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                'a' | 'A' => out.push(Letter::A),
                'B' => out.push(Letter::Bi),
                'b' => {
                    if chars[i + 1..].starts_with(&['^', '-', '1']) {
                        out.push(Letter::Bi);
                        i += 3;
                    } else if chars.get(i + 1) == Some(&'-') {
                        out.push(Letter::Bi);
                        i += 1;
                    } else {
                        out.push(Letter::B);
                    }
                }
                c if c.is_whitespace() => {}
                ch => return Err(WordError::IllegalChar { ch, pos: i }),
            }
            i += 1;
        }
        Ok(Word(out))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Parses a comma-separated list of words.
pub fn parse_word_list(s: &str) -> Result<Vec<Word>, WordError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}

/// A word with no factor aa, bb, BB, bB or Bb.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeodesicWord(Word);

impl GeodesicWord {
    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0 .0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> GeodesicWord {
        GeodesicWord(self.0.inverse())
    }

    pub fn mul(&self, other: &GeodesicWord) -> GeodesicWord {
        normalize(&self.0.concat(&other.0))
    }

    pub fn is_geodesic(w: &Word) -> bool {
        w.0.windows(2).all(|p| p[0].is_a() != p[1].is_a())
    }
}

impl fmt::Display for GeodesicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<GeodesicWord> for Word {
    fn from(g: GeodesicWord) -> Word {
        g.0
    }
}

fn push_reduced(stack: &mut Vec<Letter>, x: Letter) {
    use Letter::*;
    match (stack.last().copied(), x) {
        (Some(A), A) | (Some(B), Bi) | (Some(Bi), B) => {
            stack.pop();
        }
        (Some(B), B) => {
            stack.pop();
            stack.push(Bi);
        }
        (Some(Bi), Bi) => {
            stack.pop();
            stack.push(B);
        }
        _ => stack.push(x),
    }
}

/// Geodesic representative via the rules aa→ε, bB→ε, Bb→ε, bb→B, BB→b.
pub fn normalize(w: &Word) -> GeodesicWord {
    let mut stack = Vec::with_capacity(w.len());
    for &x in &w.0 {
        push_reduced(&mut stack, x);
    }
    GeodesicWord(Word(stack))
}

/// Returns (c, u) with w = c·u·c⁻¹, u cyclically reduced and c shortest.
pub fn cyclic_reduce(w: &GeodesicWord) -> (GeodesicWord, GeodesicWord) {
    let l = w.letters();
    let (mut lo, mut hi) = (0, l.len());
    let mut conj = Vec::new();
    while hi - lo >= 2 && l[lo].is_a() == l[hi - 1].is_a() {
        let (x, y) = (l[lo], l[hi - 1]);
        conj.push(x);
        if x == y.inverse() {
            lo += 1;
            hi -= 1;
        } else {
            // x u x with x a b-letter: conjugate to u·x² = u·x⁻¹.
            let mut core = l[lo + 1..hi - 1].to_vec();
            core.push(x.inverse());
            return (GeodesicWord(Word(conj)), GeodesicWord(Word(core)));
        }
    }
    (GeodesicWord(Word(conj)), GeodesicWord(Word(l[lo..hi].to_vec())))
}

/// Whether the element has infinite order (torsion elements are
/// conjugates of a, b or b⁻¹).
pub fn is_infinite_order(w: &Word) -> bool {
    cyclic_reduce(&normalize(w)).1.len() >= 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn nf(s: &str) -> String {
        normalize(&w(s)).to_string()
    }

    #[test]
    fn normal_forms() {
        assert_eq!(nf("aa"), "");
        assert_eq!(nf("abb"), "aB");
        assert_eq!(nf("baBBab"), "babab");
        assert_eq!(nf("bbb"), "");
        assert_eq!(nf("abBa"), "");
        assert_eq!(nf("Ab^-1b-"), "ab");
    }

    #[test]
    fn illegal_characters() {
        assert_eq!("abc".parse::<Word>(), Err(WordError::IllegalChar { ch: 'c', pos: 2 }));
    }

    #[test]
    fn cyclic_reduction_recomposes() {
        for s in ["ab", "Bab", "aba", "bab", "abaB", "BabaBab", "a", "", "babBab"] {
            let g = normalize(&w(s));
            let (c, u) = cyclic_reduce(&g);
            assert_eq!(c.mul(&u).mul(&c.inverse()), g, "{s}");
            let ul = u.letters();
            assert!(ul.len() <= 1 || ul[0].is_a() != ul[ul.len() - 1].is_a(), "{s}");
        }
        let (c, u) = cyclic_reduce(&normalize(&w("aba")));
        assert_eq!((c.to_string(), u.to_string()), ("a".into(), "b".into()));
        let (c, u) = cyclic_reduce(&normalize(&w("ab")));
        assert_eq!((c.to_string(), u.to_string()), ("".into(), "ab".into()));
    }

    #[test]
    fn orders() {
        assert!(is_infinite_order(&w("ab")));
        assert!(!is_infinite_order(&w("aba")));
        assert!(!is_infinite_order(&w("")));
        assert!(!is_infinite_order(&w("BaBab")));
        assert!(is_infinite_order(&w("bab")));
    }

    #[test]
    fn word_lists() {
        let l = parse_word_list("abaB, babab").unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l[1].to_string(), "babab");
        assert!(parse_word_list("").unwrap().is_empty());
    }
}
