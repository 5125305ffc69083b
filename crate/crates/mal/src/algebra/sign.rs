use crate::error::{Error, Result};
use std::fmt;

/// `+` or `−`; `Plus` sorts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("bad sign {c:?}"))),
        }
    }
}

/// Signs `θ_j` on a finite sorted set of generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignVector {
    entries: Vec<(u32, Sign)>,
}

impl SignVector {
    pub fn new(mut entries: Vec<(u32, Sign)>) -> Result<Self> {
        entries.sort();
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParams("repeated index in sign vector".into()));
        }
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Pairs `indices[i]` with `signs[i]`.
    pub fn from_parts(indices: &[u32], signs: &[Sign]) -> Result<Self> {
        if indices.len() != signs.len() {
            return Err(Error::InvalidParams("indices and signs differ in length".into()));
        }
        Self::new(indices.iter().copied().zip(signs.iter().copied()).collect())
    }

    /// Parses a sign string like `"+-+"` over the given indices.
    pub fn parse(indices: &[u32], signs: &str) -> Result<Self> {
        let signs: Vec<Sign> = signs.chars().map(Sign::from_symbol).collect::<Result<_>>()?;
        Self::from_parts(indices, &signs)
    }

    pub fn constant(indices: &[u32], sign: Sign) -> Self {
        Self { entries: indices.iter().map(|&i| (i, sign)).collect() }
            .sorted_unchecked()
    }

    fn sorted_unchecked(mut self) -> Self {
        self.entries.sort();
        self
    }

    pub fn entries(&self) -> &[(u32, Sign)] {
        &self.entries
    }

    pub fn indices(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sign_of(&self, index: u32) -> Option<Sign> {
        self.entries.iter().find(|e| e.0 == index).map(|e| e.1)
    }

    /// Appends an index larger than every present one, or inserts in order.
    pub fn with(&self, index: u32, sign: Sign) -> Result<Self> {
        let mut e = self.entries.clone();
        e.push((index, sign));
        Self::new(e)
    }

    /// The signs as a string such as `"+-+"`, in index order.
    pub fn sign_string(&self) -> String {
        self.entries.iter().map(|e| e.1.symbol()).collect()
    }

    /// Whether the two vectors disagree on some shared index, which makes
    /// their particles disjoint.
    pub fn conflicts_with(&self, other: &Self) -> bool {
        self.entries.iter().any(|&(i, s)| other.sign_of(i) == Some(s.flip()))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.1.symbol().to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct SignVectorRepr {
    indices: Vec<u32>,
    signs: String,
}

impl serde::Serialize for SignVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SignVectorRepr { indices: self.indices(), signs: self.sign_string() }.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for SignVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SignVectorRepr::deserialize(d)?;
        SignVector::parse(&r.indices, &r.signs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let sv = SignVector::parse(&[1, 2], "+-").unwrap();
        assert_eq!(sv.to_string(), "(+,-)");
        assert_eq!(sv.sign_of(2), Some(Sign::Minus));
        assert!(SignVector::parse(&[1, 1], "++").is_err());
        assert!(SignVector::parse(&[1], "+-").is_err());
    }

    #[test]
    fn conflicts() {
        let a = SignVector::parse(&[1, 2], "++").unwrap();
        let b = SignVector::parse(&[2], "-").unwrap();
        let c = SignVector::parse(&[3], "-").unwrap();
        assert!(a.conflicts_with(&b));
        assert!(!a.conflicts_with(&c));
    }
}
