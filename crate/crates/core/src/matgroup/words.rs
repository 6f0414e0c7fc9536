use std::fmt;

use indexmap::IndexSet;
use rayon::prelude::*;

use super::{GroupContext, PslElem, MAX_GENERATORS};
use crate::error::{Error, Result};

/// Default bound on the number of distinct elements an enumeration may hold.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// A generator or its inverse, written `a`..`z` and `A`..`Z` respectively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        assert!(generator < MAX_GENERATORS);
        Self((generator as u8) * 2 + inverse as u8)
    }

    pub fn generator(&self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_inverse(&self) -> bool {
        self.0 % 2 == 1
    }

    pub fn inverse(&self) -> Self {
        Self(self.0 ^ 1)
    }

    pub fn to_char(&self) -> char {
        let c = (b'a' + self.generator() as u8) as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        if !c.is_ascii_alphabetic() {
            return None;
        }
        let g = (c.to_ascii_lowercase() as u8 - b'a') as usize;
        Some(Self::new(g, c.is_ascii_uppercase()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `"1"` is the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::default());
        }
        s.chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::Parse(format!("bad letter {c:?} in word {s:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn evaluate(&self, ctx: &GroupContext) -> Result<PslElem> {
        let gens = ctx.psl_generators();
        let mut acc = PslElem::identity(ctx.field());
        for l in &self.0 {
            let g = gens.get(l.generator()).ok_or_else(|| {
                Error::OutOfRange(format!("letter {} but only {} generators", l.to_char(), gens.len()))
            })?;
            acc = acc.mul(&if l.is_inverse() { g.inv() } else { *g });
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// One enumerated element with a shortest word reaching it.
#[derive(Clone, Debug)]
pub struct WordEntry<'a> {
    pub index: usize,
    pub word: Word,
    pub elem: &'a PslElem,
    pub length: usize,
}

/// The ball of radius `depth` in the Cayley graph, in breadth-first order.
///
/// Words are stored as a tree (parent index plus final letter), so each
/// element is kept exactly once.
#[derive(Clone, Debug)]
pub struct Enumeration {
    elems: IndexSet<PslElem>,
    parent: Vec<(u32, Letter)>,
    level_ends: Vec<usize>,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// The depth actually reached.
    pub fn depth(&self) -> usize {
        self.level_ends.len() - 1
    }

    pub fn elem(&self, i: usize) -> &PslElem {
        &self.elems[i]
    }

    pub fn length(&self, i: usize) -> usize {
        self.level_ends.partition_point(|&end| end <= i)
    }

    pub fn word(&self, mut i: usize) -> Word {
        let mut letters = Vec::with_capacity(self.length(i));
        while i != 0 {
            let (p, l) = self.parent[i];
            letters.push(l);
            i = p as usize;
        }
        letters.reverse();
        Word(letters)
    }

    pub fn index_of(&self, g: &PslElem) -> Option<usize> {
        self.elems.get_index_of(g)
    }

    pub fn contains(&self, g: &PslElem) -> bool {
        self.elems.contains(g)
    }

    /// Index range of the elements of word length exactly `w`.
    pub fn level(&self, w: usize) -> std::ops::Range<usize> {
        if w >= self.level_ends.len() {
            return self.len()..self.len();
        }
        let start = if w == 0 { 0 } else { self.level_ends[w - 1] };
        start..self.level_ends[w]
    }

    pub fn entry(&self, i: usize) -> WordEntry<'_> {
        WordEntry { index: i, word: self.word(i), elem: &self.elems[i], length: self.length(i) }
    }

    pub fn iter(&self) -> impl Iterator<Item = WordEntry<'_>> + '_ {
        (0..self.len()).map(move |i| self.entry(i))
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &PslElem> + '_ {
        self.elems.iter()
    }
}

/// Every element of word length at most `depth`, each once, in breadth-first
/// order, starting with the identity at length 0.
pub fn enumerate_words(ctx: &GroupContext, depth: usize) -> Result<Enumeration> {
    enumerate_words_capped(ctx, depth, DEFAULT_ELEMENT_CAP)
}

pub fn enumerate_words_capped(ctx: &GroupContext, depth: usize, cap: usize) -> Result<Enumeration> {
    let gens = ctx.psl_generators();
    let letters: Vec<(Letter, PslElem)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [(Letter::new(i, false), *g), (Letter::new(i, true), g.inv())])
        .collect();
    let mut e = Enumeration {
        elems: IndexSet::new(),
        parent: Vec::new(),
        level_ends: Vec::new(),
    };
    e.elems.insert(PslElem::identity(ctx.field()));
    e.parent.push((0, Letter(0)));
    e.level_ends.push(1);
    if cap == 0 {
        return Err(Error::CapExceeded { cap });
    }
    for _ in 0..depth {
        let frontier = e.level(e.depth());
        if frontier.is_empty() {
            break;
        }
        let elems = &e.elems;
        let parent = &e.parent;
        // products are computed in parallel; insertion order stays that of the frontier
        let candidates: Vec<(u32, Letter, PslElem)> = frontier
            .into_par_iter()
            .flat_map_iter(|i| {
                let last = (i != 0).then(|| parent[i].1);
                let g = elems[i];
                letters
                    .iter()
                    .filter(move |(l, _)| last != Some(l.inverse()))
                    .map(move |(l, h)| (i as u32, *l, g.mul(h)))
            })
            .collect();
        for (p, l, g) in candidates {
            if e.elems.insert(g) {
                if e.elems.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                e.parent.push((p, l));
            }
        }
        e.level_ends.push(e.elems.len());
    }
    Ok(e)
}
