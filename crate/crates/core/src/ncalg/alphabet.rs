use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};

/// Index of a generator inside its [`Alphabet`]; also its rank in the
/// canonical total order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub u16);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    /// Weight in the termination order.
    pub weight: u32,
}

/// Ordered generator set. Declaration order is the canonical order.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    gens: Vec<Generator>,
    by_name: HashMap<String, GenId>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str, parity: Parity, weight: u32) -> Result<GenId> {
        if self.by_name.contains_key(name) {
            return Err(Error::DuplicateGenerator(name.to_string()));
        }
        let id = GenId(self.gens.len() as u16);
        self.gens.push(Generator { name: name.to_string(), parity, weight });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn even(&mut self, name: &str) -> GenId {
        self.push(name, Parity::Even, 1).expect("fresh generator")
    }

    pub fn odd(&mut self, name: &str) -> GenId {
        self.push(name, Parity::Odd, 1).expect("fresh generator")
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.gens.len() as u16).map(GenId)
    }

    pub fn get(&self, id: GenId) -> &Generator {
        &self.gens[id.index()]
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.gens[id.index()].name
    }

    pub fn parity(&self, id: GenId) -> Parity {
        self.gens[id.index()].parity
    }

    pub fn is_odd(&self, id: GenId) -> bool {
        self.parity(id) == Parity::Odd
    }

    pub fn id(&self, name: &str) -> Result<GenId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.gens.iter().map(|g| g.name.as_str())
    }

    /// Number of odd letters in `word`.
    pub fn degree(&self, word: &[GenId]) -> usize {
        word.iter().filter(|g| self.is_odd(**g)).count()
    }

    pub fn weight(&self, word: &[GenId]) -> u64 {
        word.iter().map(|g| self.get(*g).weight as u64).sum()
    }

    /// Weighted degree-lexicographic order: total weight first, then the
    /// letters compared by canonical rank.
    pub fn compare(&self, a: &[GenId], b: &[GenId]) -> Ordering {
        self.weight(a)
            .cmp(&self.weight(b))
            .then_with(|| a.len().cmp(&b.len()))
            .then_with(|| a.cmp(b))
    }

    pub fn render_word(&self, word: &[GenId]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < word.len() {
            let g = word[i];
            let mut run = 1;
            while i + run < word.len() && word[i + run] == g {
                run += 1;
            }
            let name = self.name(g);
            let (shown, consumed) = if run > 1 && !name.contains('^') {
                (format!("{name}^{run}"), run)
            } else {
                (name.to_string(), 1)
            };
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&shown);
            i += consumed;
        }
        out
    }

    /// Fingerprint material: generator names, parities and weights in order.
    pub fn describe(&self) -> String {
        self.gens
            .iter()
            .map(|g| {
                let p = if g.parity == Parity::Odd { "odd" } else { "even" };
                format!("{}:{}:{}", g.name, p, g.weight)
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_order() {
        let mut a = Alphabet::new();
        let x = a.even("x");
        let y = a.even("y");
        let big = a.push("D", Parity::Odd, 4).unwrap();
        assert_eq!(a.compare(&[x, y], &[y, x]), Ordering::Less);
        assert_eq!(a.compare(&[x, x, x, y], &[big]), Ordering::Greater);
        assert_eq!(a.compare(&[x, x, x], &[big]), Ordering::Less);
        assert_eq!(a.degree(&[x, big, big]), 2);
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut a = Alphabet::new();
        a.even("x");
        assert!(matches!(a.push("x", Parity::Even, 1), Err(Error::DuplicateGenerator(_))));
    }

    #[test]
    fn word_rendering_collapses_runs() {
        let mut a = Alphabet::new();
        let p = a.even("f+");
        let ri = a.even("r^-1");
        assert_eq!(a.render_word(&[p, p, ri, ri]), "f+^2 r^-1 r^-1");
        assert_eq!(a.render_word(&[]), "1");
    }
}
