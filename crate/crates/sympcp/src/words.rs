//! Words over finite alphabets and correspondence instances built from
//! ordered pairs of such words.
//!
//! A [`Word`] stores symbol indices into a shared [`Alphabet`], so symbol
//! comparison is integer comparison and tokens can be arbitrary strings
//! (single characters, `a~`-style decorated letters, ...). A
//! [`PcpInstance`] is an ordered, duplicate-free list of pairs `(u_i, v_i)`
//! with `u_i != v_i`; a [`PcpSolution`] is a non-empty index sequence
//! `j_1 .. j_n` and it solves the instance when
//! `u_{j_1} .. u_{j_n} == v_{j_1} .. v_{j_n}`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug)]
struct AlphabetInner {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
    max_token_len: usize,
    single_char: bool,
}

/// An ordered list of distinct symbol tokens.
///
/// Cloning is cheap (the token table is shared); equality compares the token
/// lists, so two independently built alphabets with the same tokens are
/// interchangeable.
#[derive(Debug, Clone)]
pub struct Alphabet(Arc<AlphabetInner>);

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = HashMap::new();
        let mut max_token_len = 0;
        for (i, tok) in tokens.iter().enumerate() {
            if tok.is_empty() || tok.chars().any(char::is_whitespace) {
                return Err(Error::BadToken(tok.clone()));
            }
            if index.insert(tok.clone(), i as u32).is_some() {
                return Err(Error::DuplicateToken(tok.clone()));
            }
            max_token_len = max_token_len.max(tok.len());
        }
        let single_char = tokens.iter().all(|t| t.chars().count() == 1);
        Ok(Alphabet(Arc::new(AlphabetInner {
            tokens,
            index,
            max_token_len,
            single_char,
        })))
    }

    /// The two-symbol alphabet `0,1`.
    pub fn binary() -> Self {
        Alphabet::new(["0", "1"]).expect("fixed alphabet")
    }

    /// The four-symbol alphabet `0,1,2,3`.
    pub fn quaternary() -> Self {
        Alphabet::new(["0", "1", "2", "3"]).expect("fixed alphabet")
    }

    pub fn size(&self) -> usize {
        self.0.tokens.len()
    }

    pub fn tokens(&self) -> &[String] {
        &self.0.tokens
    }

    pub fn token(&self, index: u32) -> &str {
        &self.0.tokens[index as usize]
    }

    pub fn index_of(&self, token: &str) -> Option<u32> {
        self.0.index.get(token).copied()
    }

    pub fn empty_word(&self) -> Word {
        Word {
            alphabet: self.clone(),
            symbols: Vec::new(),
        }
    }

    pub fn word_from_indices(&self, symbols: Vec<u32>) -> Result<Word> {
        for &s in &symbols {
            if s as usize >= self.size() {
                return Err(Error::SymbolOutOfRange {
                    index: s,
                    size: self.size(),
                });
            }
        }
        Ok(Word {
            alphabet: self.clone(),
            symbols,
        })
    }

    pub fn word_from_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Word> {
        let symbols = tokens
            .iter()
            .map(|t| {
                self.index_of(t.as_ref())
                    .ok_or_else(|| Error::UnknownToken(t.as_ref().to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word {
            alphabet: self.clone(),
            symbols,
        })
    }

    /// Parses a word from text. Whitespace-separated chunks are looked up as
    /// whole tokens; an unbroken string is tokenized greedily, preferring the
    /// longest token at each position (so `aa~` reads as `a`, `a~`).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text.chars().any(char::is_whitespace) {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            return self.word_from_tokens(&tokens);
        }
        let mut symbols = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let mut matched = None;
            for len in (1..=self.0.max_token_len.min(rest.len())).rev() {
                if !rest.is_char_boundary(len) {
                    continue;
                }
                if let Some(idx) = self.index_of(&rest[..len]) {
                    matched = Some((idx, len));
                    break;
                }
            }
            match matched {
                Some((idx, len)) => {
                    symbols.push(idx);
                    rest = &rest[len..];
                }
                None => return Err(Error::Untokenizable(text.to_owned())),
            }
        }
        Ok(Word {
            alphabet: self.clone(),
            symbols,
        })
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.tokens == other.0.tokens
    }
}

impl Eq for Alphabet {}

impl std::hash::Hash for Alphabet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.tokens.hash(state);
    }
}

/// A finite word: a sequence of symbol indices into an [`Alphabet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    symbols: Vec<u32>,
}

impl Word {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|&s| self.alphabet.token(s))
    }

    /// Concatenation. Both words must share one alphabet.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        Ok(Word {
            alphabet: self.alphabet.clone(),
            symbols,
        })
    }

    pub fn is_prefix_of(&self, other: &Word) -> Result<bool> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(other.symbols.starts_with(&self.symbols))
    }

    /// True when one word is a prefix of the other (the empty word is
    /// comparable with everything).
    pub fn prefix_comparable(&self, other: &Word) -> Result<bool> {
        Ok(self.is_prefix_of(other)? || other.is_prefix_of(self)?)
    }

    /// Re-expresses this word over `target` by token lookup. Fails when a
    /// token of this word is missing from `target`.
    pub fn reembed(&self, target: &Alphabet) -> Result<Word> {
        let symbols = self
            .symbols
            .iter()
            .map(|&s| {
                let tok = self.alphabet.token(s);
                target
                    .index_of(tok)
                    .ok_or_else(|| Error::UnknownToken(tok.to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word {
            alphabet: target.clone(),
            symbols,
        })
    }
}

impl fmt::Display for Word {
    /// Single-character alphabets print words as unbroken strings; alphabets
    /// with longer tokens separate tokens with spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.alphabet.0.single_char { "" } else { " " };
        let mut first = true;
        for tok in self.tokens() {
            if !first {
                f.write_str(sep)?;
            }
            f.write_str(tok)?;
            first = false;
        }
        Ok(())
    }
}

/// A correspondence instance: an ordered list of word pairs over one
/// alphabet.
///
/// Construction enforces: at least one pair, both coordinates over the
/// instance alphabet, no pair with equal coordinates, and no duplicate
/// pairs. Pairs with one empty coordinate are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcpInstance {
    alphabet: Alphabet,
    pairs: Vec<(Word, Word)>,
}

impl PcpInstance {
    pub fn new(alphabet: Alphabet, pairs: Vec<(Word, Word)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInstance);
        }
        let mut seen: HashMap<(Vec<u32>, Vec<u32>), usize> = HashMap::new();
        for (i, (u, v)) in pairs.iter().enumerate() {
            if u.alphabet() != &alphabet || v.alphabet() != &alphabet {
                return Err(Error::AlphabetMismatch);
            }
            if u == v {
                return Err(Error::TrivialPair { index: i });
            }
            if let Some(&first) = seen.get(&(u.symbols.clone(), v.symbols.clone())) {
                return Err(Error::DuplicatePair { first, second: i });
            }
            seen.insert((u.symbols.clone(), v.symbols.clone()), i);
        }
        Ok(PcpInstance { alphabet, pairs })
    }

    /// Convenience constructor from token strings (see
    /// [`Alphabet::parse_word`] for the accepted syntax).
    pub fn parse(alphabet: Alphabet, pairs: &[(&str, &str)]) -> Result<Self> {
        let pairs = pairs
            .iter()
            .map(|(u, v)| Ok((alphabet.parse_word(u)?, alphabet.parse_word(v)?)))
            .collect::<Result<Vec<_>>>()?;
        PcpInstance::new(alphabet, pairs)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    /// Number of pairs.
    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, index: usize) -> Result<&(Word, Word)> {
        self.pairs.get(index).ok_or(Error::PairIndexOutOfRange {
            index,
            count: self.pairs.len(),
        })
    }

    /// Concatenates the chosen coordinate of the listed pairs.
    fn concat_along(&self, indices: &[usize], first_coordinate: bool) -> Result<Word> {
        let mut symbols = Vec::new();
        for &i in indices {
            let (u, v) = self.pair(i)?;
            let w = if first_coordinate { u } else { v };
            symbols.extend_from_slice(&w.symbols);
        }
        Ok(Word {
            alphabet: self.alphabet.clone(),
            symbols,
        })
    }

    /// Does the index sequence make both coordinate concatenations equal?
    pub fn check_solution(&self, sol: &PcpSolution) -> Result<bool> {
        let u = self.concat_along(sol.indices(), true)?;
        let v = self.concat_along(sol.indices(), false)?;
        Ok(u == v)
    }

    /// Is the pair set closed under coordinate swap?
    pub fn is_symmetric(&self) -> bool {
        let set: HashSet<(&[u32], &[u32])> = self
            .pairs
            .iter()
            .map(|(u, v)| (u.symbols.as_slice(), v.symbols.as_slice()))
            .collect();
        self.pairs
            .iter()
            .all(|(u, v)| set.contains(&(v.symbols.as_slice(), u.symbols.as_slice())))
    }

    /// Smallest symmetric instance containing this one: original pairs keep
    /// their order and indices, missing swapped pairs are appended in
    /// original pair order.
    pub fn symmetric_closure(&self) -> PcpInstance {
        let mut pairs = self.pairs.clone();
        let mut set: HashSet<(Vec<u32>, Vec<u32>)> = self
            .pairs
            .iter()
            .map(|(u, v)| (u.symbols.clone(), v.symbols.clone()))
            .collect();
        for (u, v) in &self.pairs {
            let swapped = (v.symbols.clone(), u.symbols.clone());
            if !set.contains(&swapped) {
                set.insert(swapped);
                pairs.push((v.clone(), u.clone()));
            }
        }
        PcpInstance {
            alphabet: self.alphabet.clone(),
            pairs,
        }
    }

    /// Index of the pair equal to pair `index` with coordinates swapped, if
    /// present.
    pub fn swap_index(&self, index: usize) -> Result<Option<usize>> {
        let (u, v) = self.pair(index)?;
        let (u, v) = (u.clone(), v.clone());
        Ok(self
            .pairs
            .iter()
            .position(|(a, b)| a.symbols == v.symbols && b.symbols == u.symbols))
    }

    /// Recodes every word over the two-symbol alphabet `0,1` using
    /// fixed-length blocks: with `l = ceil(log2 |A|)`, the symbol at table
    /// position `p` becomes the `l`-bit numeral of `p`, most significant bit
    /// first. Requires at least two symbols. Solution sets are preserved
    /// verbatim: an index sequence solves the recoded instance exactly when
    /// it solves the original.
    pub fn binary_code(&self) -> Result<PcpInstance> {
        let size = self.alphabet.size();
        if size < 2 {
            return Err(Error::AlphabetTooSmall);
        }
        let l = (size as u64).next_power_of_two().trailing_zeros().max(1);
        let binary = Alphabet::binary();
        let code = |w: &Word| -> Word {
            let mut symbols = Vec::with_capacity(w.len() * l as usize);
            for &s in &w.symbols {
                for bit in (0..l).rev() {
                    symbols.push((s >> bit) & 1);
                }
            }
            Word {
                alphabet: binary.clone(),
                symbols,
            }
        };
        let pairs = self.pairs.iter().map(|(u, v)| (code(u), code(v))).collect();
        // Fixed-length block codes are injective on words, so the recoded
        // pairs inherit distinctness and non-triviality.
        PcpInstance::new(binary, pairs)
    }
}

impl fmt::Display for PcpInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (u, v)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({u}, {v})")?;
        }
        write!(f, "}}")
    }
}

/// A non-empty sequence of pair indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PcpSolution(Vec<usize>);

impl PcpSolution {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySolution);
        }
        Ok(PcpSolution(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for PcpSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

/// Widens a word over a four-symbol alphabet to the two-symbol alphabet by
/// table position: `0 -> 00`, `1 -> 01`, `2 -> 10`, `3 -> 11`. This is a
/// monoid homomorphism: recoding a concatenation equals concatenating the
/// recodings.
pub fn recode_base4_to_base2(w: &Word) -> Result<Word> {
    if w.alphabet().size() != 4 {
        return Err(Error::NotQuaternary);
    }
    let binary = Alphabet::binary();
    let mut symbols = Vec::with_capacity(w.len() * 2);
    for &s in w.symbols() {
        symbols.push((s >> 1) & 1);
        symbols.push(s & 1);
    }
    Ok(Word {
        alphabet: binary,
        symbols,
    })
}
