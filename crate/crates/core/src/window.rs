//! Finite windows of two-sided sequences, with absolute positions.

use crate::error::{Error, Result};
use crate::morphism::{Alphabet, Letter, Substitution, Word};

/// Letters of a sequence on the integer interval `[lo, lo + len - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Window {
    lo: i64,
    letters: Word,
}

impl Window {
    pub fn new(lo: i64, letters: Word) -> Self {
        Window { lo, letters }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Last covered position; `lo - 1` for an empty window.
    pub fn hi(&self) -> i64 {
        self.lo + self.letters.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Word {
        self.letters
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo >= self.lo && hi <= self.hi()
    }

    pub fn get(&self, pos: i64) -> Option<Letter> {
        if pos < self.lo {
            return None;
        }
        self.letters.get((pos - self.lo) as usize).copied()
    }

    /// Restriction to `[lo, hi]`, which must be covered.
    pub fn slice(&self, lo: i64, hi: i64) -> Window {
        assert!(self.covers(lo, hi) || hi < lo, "slice [{lo},{hi}] outside [{},{}]", self.lo, self.hi());
        if hi < lo {
            return Window::new(lo, Vec::new());
        }
        let a = (lo - self.lo) as usize;
        let b = (hi - self.lo) as usize;
        Window::new(lo, self.letters[a..=b].to_vec())
    }

    /// The window of `T^c x`: position `n` holds `x_{n+c}`.
    pub fn shifted(&self, c: i64) -> Window {
        Window::new(self.lo - c, self.letters.clone())
    }

    /// Positions covered by both windows.
    pub fn overlap(&self, other: &Window) -> Option<(i64, i64)> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi().min(other.hi());
        (lo <= hi).then_some((lo, hi))
    }

    /// True when the windows agree wherever both are defined.
    pub fn agrees_with(&self, other: &Window) -> bool {
        match self.overlap(other) {
            None => true,
            Some((lo, hi)) => (lo..=hi).all(|p| self.get(p) == other.get(p)),
        }
    }

    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Window {
        Window::new(self.lo, self.letters.iter().map(|&a| f(a)).collect())
    }

    /// Smallest period `p ≤ max_p` of the letters, if any.
    pub fn period(&self, max_p: usize) -> Option<usize> {
        let w = &self.letters;
        (1..=max_p.min(w.len().saturating_sub(1))).find(|&p| (p..w.len()).all(|i| w[i] == w[i - p]))
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!("pos={} {}", self.lo, alphabet.render(&self.letters))
    }

    /// Parses the `pos=<lo> <letters>` rendering.
    pub fn parse(alphabet: &Alphabet, s: &str) -> Result<Window> {
        let s = s.trim();
        let (lo, rest) = match s.strip_prefix("pos=") {
            Some(r) => {
                let (num, rest) = r.split_once(char::is_whitespace).unwrap_or((r, ""));
                let lo = num.parse::<i64>().map_err(|_| Error::InvalidArgument(format!("bad position `{num}`")))?;
                (lo, rest)
            }
            None => (0, s),
        };
        Ok(Window::new(lo, alphabet.parse_word(rest)?))
    }
}

/// The image window `φ(x)`, aligned so that `φ(x_0)` starts at position 0.
///
/// For non-constant lengths the window must contain position 0 or start at 1, since the
/// offset of the image depends on the letters left of the origin.
pub fn image_window(phi: &Substitution, x: &Window) -> Window {
    let letters = phi.apply(x.letters());
    let lo = match phi.constant_length() {
        Some(k) => x.lo() * k as i64,
        None => {
            assert!(x.lo() <= 0 && x.hi() >= -1, "non-constant image needs a window around the origin");
            let left = x.slice(x.lo(), -1);
            -(phi.apply(left.letters()).len() as i64)
        }
    };
    Window::new(lo, letters)
}
