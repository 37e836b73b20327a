//! Floyd's reduction from the word problem of a finitely presented
//! semigroup to a correspondence instance.
//!
//! Take a presentation with letter set `B` and a symmetric relation set
//! `R`. Two words `x, y` over `B` are equal in the presented semigroup
//! exactly when some derivation `x = x_1 -> x_2 -> ... -> x_n = y` rewrites
//! one relation occurrence per step. The derived instance works over the
//! alphabet
//!
//! ```text
//! <   >   o   o~   b (for b in B)   b~ (for b in B)
//! ```
//!
//! (`<`/`>` are end markers, `o` is a step separator, and a trailing `~`
//! marks the overlined copy of a symbol). Its pairs are the letter copies
//! `(b, b~)` and `(b~, b)` for `b in B + {o}`, the relation pairs
//! `(u, v~)` and `(u~, v)` for `(u, v) in R`, and the two end pairs
//! `(<xo, <)` and `(>, o~y>)`. A solution must spell
//!
//! ```text
//! < x_1 o x_2~ o~ x_3 o ... x_n >
//! ```
//!
//! in both coordinates — a derivation from `x` to `y` with every second
//! word overlined, which is why solvability decides the word problem. The
//! symmetric variant appends the coordinate swaps of the two end pairs,
//! making the whole pair set swap-closed without changing which derivations
//! exist.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::words::{Alphabet, PcpInstance, PcpSolution, Word};

/// A finitely presented semigroup: letters plus rewrite relations closed
/// under swapping the two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    letters: Alphabet,
    relations: Vec<(Word, Word)>,
}

impl Presentation {
    /// Builds a presentation. Relation sides must be non-empty words over
    /// `letters`. The relation list is closed under swap: original
    /// relations keep their order, missing swapped relations are appended
    /// in original order, and exact duplicates collapse.
    pub fn new(letters: Alphabet, relations: Vec<(Word, Word)>) -> Result<Self> {
        let mut closed: Vec<(Word, Word)> = Vec::new();
        let mut push = |lhs: &Word, rhs: &Word| {
            if !closed.iter().any(|(a, b)| a == lhs && b == rhs) {
                closed.push((lhs.clone(), rhs.clone()));
            }
        };
        for (lhs, rhs) in &relations {
            if lhs.alphabet() != &letters || rhs.alphabet() != &letters {
                return Err(Error::AlphabetMismatch);
            }
            if lhs.is_empty() || rhs.is_empty() {
                return Err(Error::EmptyRelationSide);
            }
            push(lhs, rhs);
        }
        for (lhs, rhs) in &relations {
            push(rhs, lhs);
        }
        Ok(Presentation {
            letters,
            relations: closed,
        })
    }

    pub fn parse(letters: Alphabet, relations: &[(&str, &str)]) -> Result<Self> {
        let relations = relations
            .iter()
            .map(|(l, r)| Ok((letters.parse_word(l)?, letters.parse_word(r)?)))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(letters, relations)
    }

    pub fn letters(&self) -> &Alphabet {
        &self.letters
    }

    pub fn relations(&self) -> &[(Word, Word)] {
        &self.relations
    }

    pub fn word(&self, text: &str) -> Result<Word> {
        self.letters.parse_word(text)
    }
}

/// Where a derivation step rewrites: `steps[t][position ..]` starts with
/// the left side of relation `relation`, which the step replaces by its
/// right side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewriteWitness {
    pub position: usize,
    pub relation: usize,
}

/// A derivation `x_1 -> x_2 -> ... -> x_n` with one witness per step. A
/// `None` witness is a copy step: the word is repeated unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    steps: Vec<Word>,
    witnesses: Vec<Option<RewriteWitness>>,
}

impl Derivation {
    pub fn new(steps: Vec<Word>, witnesses: Vec<Option<RewriteWitness>>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyDerivation);
        }
        if witnesses.len() + 1 != steps.len() {
            return Err(Error::WitnessCountMismatch {
                steps: steps.len(),
                witnesses: witnesses.len(),
            });
        }
        let alphabet = steps[0].alphabet().clone();
        for w in &steps {
            if w.alphabet() != &alphabet {
                return Err(Error::AlphabetMismatch);
            }
            if w.is_empty() {
                return Err(Error::EmptyDerivationWord);
            }
        }
        Ok(Derivation { steps, witnesses })
    }

    pub fn steps(&self) -> &[Word] {
        &self.steps
    }

    pub fn witnesses(&self) -> &[Option<RewriteWitness>] {
        &self.witnesses
    }

    pub fn first(&self) -> &Word {
        &self.steps[0]
    }

    pub fn last(&self) -> &Word {
        self.steps.last().expect("non-empty")
    }
}

/// Checks one step; `Ok(true)` when `to` follows from `from` by the
/// witnessed rewrite (or is an exact copy for a `None` witness).
fn check_step(
    pres: &Presentation,
    from: &Word,
    to: &Word,
    witness: &Option<RewriteWitness>,
    step: usize,
) -> Result<bool> {
    match witness {
        None => Ok(from == to),
        Some(w) => {
            let (lhs, rhs) =
                pres.relations
                    .get(w.relation)
                    .ok_or_else(|| Error::MalformedWitness {
                        step,
                        reason: format!(
                            "relation index {} out of range for {} relations",
                            w.relation,
                            pres.relations.len()
                        ),
                    })?;
            if w.position + lhs.len() > from.len() {
                return Err(Error::MalformedWitness {
                    step,
                    reason: format!(
                        "position {} leaves no room for a length-{} left side in a length-{} word",
                        w.position,
                        lhs.len(),
                        from.len()
                    ),
                });
            }
            let f = from.symbols();
            let t = to.symbols();
            let pos = w.position;
            let matches = f[pos..pos + lhs.len()] == *lhs.symbols()
                && t.len() == f.len() - lhs.len() + rhs.len()
                && t[..pos] == f[..pos]
                && t[pos..pos + rhs.len()] == *rhs.symbols()
                && t[pos + rhs.len()..] == f[pos + lhs.len()..];
            Ok(matches)
        }
    }
}

/// First failing step of a derivation, if any. Structural problems
/// (alphabet mismatch, out-of-range witnesses) are errors.
fn first_invalid_step(pres: &Presentation, d: &Derivation) -> Result<Option<usize>> {
    if d.first().alphabet() != &pres.letters {
        return Err(Error::AlphabetMismatch);
    }
    for (t, witness) in d.witnesses.iter().enumerate() {
        if !check_step(pres, &d.steps[t], &d.steps[t + 1], witness, t)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Does every step of the derivation rewrite a single relation occurrence
/// (or copy the word, for a `None` witness)? A one-word derivation is
/// trivially valid.
pub fn check_derivation(pres: &Presentation, d: &Derivation) -> Result<bool> {
    Ok(first_invalid_step(pres, d)?.is_none())
}

/// The derived alphabet: `<`, `>`, `o`, `o~`, the presentation letters, and
/// their `~`-overlined copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloydAlphabet {
    letters: Alphabet,
    full: Alphabet,
}

impl FloydAlphabet {
    pub const LMARK: u32 = 0;
    pub const RMARK: u32 = 1;
    pub const RING: u32 = 2;
    pub const RING_BAR: u32 = 3;

    pub fn new(letters: &Alphabet) -> Result<Self> {
        let mut tokens: Vec<String> = vec!["<".into(), ">".into(), "o".into(), "o~".into()];
        for tok in letters.tokens() {
            if tok == "<" || tok == ">" || tok == "o" || tok.ends_with('~') {
                return Err(Error::ReservedLetter(tok.clone()));
            }
            tokens.push(tok.clone());
        }
        for tok in letters.tokens() {
            tokens.push(format!("{tok}~"));
        }
        Ok(FloydAlphabet {
            letters: letters.clone(),
            full: Alphabet::new(tokens)?,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.full
    }

    pub fn letters(&self) -> &Alphabet {
        &self.letters
    }

    fn letter_count(&self) -> u32 {
        self.letters.size() as u32
    }

    /// Symbol of the plain copy of letter `i`.
    fn plain(&self, letter: u32) -> u32 {
        4 + letter
    }

    /// Symbol of the overlined copy of letter `i`.
    fn over(&self, letter: u32) -> u32 {
        4 + self.letter_count() + letter
    }

    fn as_plain_letter(&self, symbol: u32) -> Option<u32> {
        (symbol >= 4 && symbol < 4 + self.letter_count()).then(|| symbol - 4)
    }

    fn as_overlined_letter(&self, symbol: u32) -> Option<u32> {
        let m = self.letter_count();
        (symbol >= 4 + m && symbol < 4 + 2 * m).then(|| symbol - 4 - m)
    }

    fn check_letters(&self, w: &Word) -> Result<()> {
        if w.alphabet() != &self.letters {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    /// Embeds a word over the letters as its plain copy.
    pub fn embed(&self, w: &Word) -> Result<Word> {
        self.check_letters(w)?;
        self.full
            .word_from_indices(w.symbols().iter().map(|&s| self.plain(s)).collect())
    }

    /// Embeds a word over the letters as its overlined copy.
    pub fn embed_overlined(&self, w: &Word) -> Result<Word> {
        self.check_letters(w)?;
        self.full
            .word_from_indices(w.symbols().iter().map(|&s| self.over(s)).collect())
    }
}

fn word_of(full: &Alphabet, symbols: Vec<u32>) -> Word {
    full.word_from_indices(symbols).expect("derived symbols")
}

/// The shared pair list of [`build_pcp`] and [`build_sympcp`].
fn reduction_pairs(
    pres: &Presentation,
    x: &Word,
    y: &Word,
    symmetric: bool,
) -> Result<(FloydAlphabet, Vec<(Word, Word)>)> {
    let fa = FloydAlphabet::new(&pres.letters)?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyDerivationWord);
    }
    let ex = fa.embed(x)?;
    let ey = fa.embed(y)?;
    let full = fa.alphabet().clone();

    let mut pairs: Vec<(Word, Word)> = Vec::new();
    let mut push = |u: Word, v: Word| {
        // The displayed pair families form a set; overlaps (possible only
        // for degenerate presentations) collapse.
        if !pairs.iter().any(|(a, b)| a == &u && b == &v) {
            pairs.push((u, v));
        }
    };

    // Letter copies, plain over overlined, for B + {o}.
    for i in 0..fa.letter_count() {
        push(
            word_of(&full, vec![fa.plain(i)]),
            word_of(&full, vec![fa.over(i)]),
        );
    }
    push(
        word_of(&full, vec![FloydAlphabet::RING]),
        word_of(&full, vec![FloydAlphabet::RING_BAR]),
    );
    // Letter copies, overlined over plain.
    for i in 0..fa.letter_count() {
        push(
            word_of(&full, vec![fa.over(i)]),
            word_of(&full, vec![fa.plain(i)]),
        );
    }
    push(
        word_of(&full, vec![FloydAlphabet::RING_BAR]),
        word_of(&full, vec![FloydAlphabet::RING]),
    );
    // Relation pairs (u, v~).
    for (u, v) in &pres.relations {
        push(fa.embed(u)?, fa.embed_overlined(v)?);
    }
    // Relation pairs (u~, v).
    for (u, v) in &pres.relations {
        push(fa.embed_overlined(u)?, fa.embed(v)?);
    }
    // End pairs.
    let mut start_first = vec![FloydAlphabet::LMARK];
    start_first.extend_from_slice(ex.symbols());
    start_first.push(FloydAlphabet::RING);
    let start_first = word_of(&full, start_first);
    let start_second = word_of(&full, vec![FloydAlphabet::LMARK]);
    let mut end_second = vec![FloydAlphabet::RING_BAR];
    end_second.extend_from_slice(ey.symbols());
    end_second.push(FloydAlphabet::RMARK);
    let end_second = word_of(&full, end_second);
    let end_first = word_of(&full, vec![FloydAlphabet::RMARK]);
    push(start_first.clone(), start_second.clone());
    push(end_first.clone(), end_second.clone());
    if symmetric {
        push(start_second, start_first);
        push(end_second, end_first);
    }
    Ok((fa, pairs))
}

/// The derived correspondence instance for deciding `x = y` in the
/// presented semigroup. For a presentation without single-letter trivial
/// relations the pair count is `2|B| + 2 + 2|R| + 2`.
pub fn build_pcp(pres: &Presentation, x: &Word, y: &Word) -> Result<PcpInstance> {
    let (fa, pairs) = reduction_pairs(pres, x, y, false)?;
    PcpInstance::new(fa.alphabet().clone(), pairs)
}

/// The swap-closed variant: [`build_pcp`] plus the coordinate swaps of the
/// two end pairs. Solvable exactly when [`build_pcp`] is.
pub fn build_sympcp(pres: &Presentation, x: &Word, y: &Word) -> Result<PcpInstance> {
    let (fa, pairs) = reduction_pairs(pres, x, y, true)?;
    PcpInstance::new(fa.alphabet().clone(), pairs)
}

/// One chunk of a derivation level: either a letter copied unchanged or a
/// relation rewriting `lhs` to `rhs`.
enum LevelChunk<'a> {
    Copy(u32),
    Rewrite { lhs: &'a Word, rhs: &'a Word },
}

fn level_chunks<'a>(
    pres: &'a Presentation,
    from: &Word,
    witness: &Option<RewriteWitness>,
) -> Vec<LevelChunk<'a>> {
    let symbols = from.symbols();
    match witness {
        None => symbols.iter().map(|&s| LevelChunk::Copy(s)).collect(),
        Some(w) => {
            let (lhs, rhs) = &pres.relations[w.relation];
            let mut chunks = Vec::new();
            for &s in &symbols[..w.position] {
                chunks.push(LevelChunk::Copy(s));
            }
            chunks.push(LevelChunk::Rewrite { lhs, rhs });
            for &s in &symbols[w.position + lhs.len()..] {
                chunks.push(LevelChunk::Copy(s));
            }
            chunks
        }
    }
}

/// Translates a valid derivation into a solution of the derived symmetric
/// instance `build_sympcp(pres, first, last)`. Derivations are padded with
/// copy steps until they have an odd number of at least three words, which
/// changes neither endpoint. The returned index sequence is also a solution
/// of `build_pcp(pres, first, last)` because the shared pairs keep their
/// indices.
pub fn derivation_to_solution(pres: &Presentation, d: &Derivation) -> Result<PcpSolution> {
    if let Some(step) = first_invalid_step(pres, d)? {
        return Err(Error::InvalidDerivation { step });
    }
    let mut steps: Vec<Word> = d.steps.to_vec();
    let mut witnesses: Vec<Option<RewriteWitness>> = d.witnesses.clone();
    while steps.len() == 1 || steps.len().is_multiple_of(2) {
        steps.push(steps.last().expect("non-empty").clone());
        witnesses.push(None);
    }
    let n = steps.len();

    let inst = build_sympcp(pres, &steps[0], &steps[n - 1])?;
    let fa = FloydAlphabet::new(&pres.letters)?;
    let full = fa.alphabet().clone();
    let index_of: HashMap<(&[u32], &[u32]), usize> = inst
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, (u, v))| ((u.symbols(), v.symbols()), i))
        .collect();
    let lookup = |u: &Word, v: &Word| -> usize {
        *index_of
            .get(&(u.symbols(), v.symbols()))
            .expect("pair built from the derived pair set")
    };

    let mut indices: Vec<usize> = Vec::new();
    // Start pair (<xo, <).
    let mut first = vec![FloydAlphabet::LMARK];
    first.extend_from_slice(fa.embed(&steps[0])?.symbols());
    first.push(FloydAlphabet::RING);
    indices.push(lookup(
        &word_of(&full, first),
        &word_of(&full, vec![FloydAlphabet::LMARK]),
    ));
    // One block per step; the word at level t is plain when t is odd
    // (1-based), overlined when t is even.
    for t in 1..n {
        let plain_bottom = t % 2 == 1;
        for chunk in level_chunks(pres, &steps[t - 1], &witnesses[t - 1]) {
            let (top, bottom) = match chunk {
                LevelChunk::Copy(s) => (
                    word_of(&full, vec![fa.over(s)]),
                    word_of(&full, vec![fa.plain(s)]),
                ),
                LevelChunk::Rewrite { lhs, rhs } => (fa.embed_overlined(rhs)?, fa.embed(lhs)?),
            };
            if plain_bottom {
                indices.push(lookup(&top, &bottom));
            } else {
                let swap_top = swap_overline(&fa, &top);
                let swap_bottom = swap_overline(&fa, &bottom);
                indices.push(lookup(&swap_top, &swap_bottom));
            }
        }
        if t <= n - 2 {
            let (sep_top, sep_bottom) = if plain_bottom {
                (FloydAlphabet::RING_BAR, FloydAlphabet::RING)
            } else {
                (FloydAlphabet::RING, FloydAlphabet::RING_BAR)
            };
            indices.push(lookup(
                &word_of(&full, vec![sep_top]),
                &word_of(&full, vec![sep_bottom]),
            ));
        }
    }
    // End pair (>, o~y>).
    let mut second = vec![FloydAlphabet::RING_BAR];
    second.extend_from_slice(fa.embed(&steps[n - 1])?.symbols());
    second.push(FloydAlphabet::RMARK);
    indices.push(lookup(
        &word_of(&full, vec![FloydAlphabet::RMARK]),
        &word_of(&full, second),
    ));

    let solution = PcpSolution::new(indices)?;
    debug_assert!(inst.check_solution(&solution).unwrap_or(false));
    Ok(solution)
}

/// Swaps plain and overlined copies in a word of letter/ring symbols.
fn swap_overline(fa: &FloydAlphabet, w: &Word) -> Word {
    let m = fa.letter_count();
    let symbols = w
        .symbols()
        .iter()
        .map(|&s| match s {
            FloydAlphabet::RING => FloydAlphabet::RING_BAR,
            FloydAlphabet::RING_BAR => FloydAlphabet::RING,
            s if s >= 4 && s < 4 + m => s + m,
            s if s >= 4 + m => s - m,
            s => s,
        })
        .collect();
    word_of(fa.alphabet(), symbols)
}

/// Splits the merged word of a solution into its derivation levels.
fn parse_levels(fa: &FloydAlphabet, merged: &Word) -> Result<Vec<Word>> {
    let malformed = |msg: &str| Error::MalformedSolution(msg.to_owned());
    let symbols = merged.symbols();
    if symbols.len() < 2 || symbols[0] != FloydAlphabet::LMARK {
        return Err(malformed("must begin with the left end marker"));
    }
    if *symbols.last().expect("checked length") != FloydAlphabet::RMARK {
        return Err(malformed("must end with the right end marker"));
    }
    let interior = &symbols[1..symbols.len() - 1];
    if interior
        .iter()
        .any(|&s| s == FloydAlphabet::LMARK || s == FloydAlphabet::RMARK)
    {
        return Err(malformed("end markers may only appear at the ends"));
    }

    let mut levels: Vec<Word> = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    // Level t (1-based) must be plain for odd t, overlined for even t, and
    // the separator after level t must be o for odd t, o~ for even t.
    let finish_level = |current: &mut Vec<u32>, levels: &mut Vec<Word>| -> Result<()> {
        if current.is_empty() {
            return Err(malformed("levels must be non-empty"));
        }
        let t = levels.len() + 1;
        let letters: Vec<u32> = current
            .iter()
            .map(|&s| {
                if t % 2 == 1 {
                    fa.as_plain_letter(s)
                        .ok_or_else(|| malformed("odd levels must be plain"))
                } else {
                    fa.as_overlined_letter(s)
                        .ok_or_else(|| malformed("even levels must be overlined"))
                }
            })
            .collect::<Result<Vec<u32>>>()?;
        levels.push(
            fa.letters()
                .word_from_indices(letters)
                .expect("letter symbols"),
        );
        current.clear();
        Ok(())
    };
    for &s in interior {
        if s == FloydAlphabet::RING || s == FloydAlphabet::RING_BAR {
            finish_level(&mut current, &mut levels)?;
            let t = levels.len();
            let expected = if t % 2 == 1 {
                FloydAlphabet::RING
            } else {
                FloydAlphabet::RING_BAR
            };
            if s != expected {
                return Err(malformed("separators must alternate o, o~"));
            }
        } else {
            current.push(s);
        }
    }
    finish_level(&mut current, &mut levels)?;
    if levels.len().is_multiple_of(2) {
        return Err(malformed("the level count must be odd"));
    }
    Ok(levels)
}

/// Splits `from -> to` into single-relation rewrites applied left to
/// right. Adjacent solution levels may rewrite several disjoint relation
/// occurrences at once; this recovers one witnessed step per occurrence.
/// Pushes `(intermediate word, witness)` pairs, ending with `to` itself.
fn decompose_level(
    relations: &[(Word, Word)],
    from: &[u32],
    to: &[u32],
    min_pos: usize,
    out: &mut Vec<(Vec<u32>, RewriteWitness)>,
) -> bool {
    if from == to {
        return true;
    }
    let limit = from.len().min(to.len());
    let mut d = min_pos;
    while d < limit && from[d] == to[d] {
        d += 1;
    }
    for pos in min_pos..=d {
        for (ri, (lhs, rhs)) in relations.iter().enumerate() {
            let (l, r) = (lhs.symbols(), rhs.symbols());
            if pos + l.len() <= from.len()
                && from[pos..pos + l.len()] == *l
                && pos + r.len() <= to.len()
                && to[pos..pos + r.len()] == *r
            {
                let mut mid = Vec::with_capacity(from.len() - l.len() + r.len());
                mid.extend_from_slice(&from[..pos]);
                mid.extend_from_slice(r);
                mid.extend_from_slice(&from[pos + l.len()..]);
                out.push((
                    mid.clone(),
                    RewriteWitness {
                        position: pos,
                        relation: ri,
                    },
                ));
                if decompose_level(relations, &mid, to, pos + r.len(), out) {
                    return true;
                }
                out.pop();
            }
        }
    }
    false
}

/// Translates a solution of `build_sympcp(pres, x, y)` back into a valid
/// derivation from `x` to `y`. Both coordinate orientations parse to the
/// same derivation because both concatenate to the same merged word.
pub fn solution_to_derivation(
    pres: &Presentation,
    x: &Word,
    y: &Word,
    sol: &PcpSolution,
) -> Result<Derivation> {
    let inst = build_sympcp(pres, x, y)?;
    let fa = FloydAlphabet::new(&pres.letters)?;
    let mut first = fa.alphabet().empty_word();
    let mut second = first.clone();
    for &i in sol.indices() {
        let (u, v) = inst.pair(i)?;
        first = first.concat(u)?;
        second = second.concat(v)?;
    }
    if first != second {
        return Err(Error::NotASolution);
    }

    let levels = parse_levels(&fa, &first)?;
    if levels.first() != Some(x) || levels.last() != Some(y) {
        return Err(Error::MalformedSolution(
            "merged word does not run from x to y".to_owned(),
        ));
    }

    let mut steps: Vec<Word> = vec![levels[0].clone()];
    let mut witnesses: Vec<Option<RewriteWitness>> = Vec::new();
    for window in levels.windows(2) {
        let (from, to) = (&window[0], &window[1]);
        if from == to {
            steps.push(to.clone());
            witnesses.push(None);
            continue;
        }
        let mut rewrites = Vec::new();
        if !decompose_level(
            &pres.relations,
            from.symbols(),
            to.symbols(),
            0,
            &mut rewrites,
        ) {
            return Err(Error::MalformedSolution(
                "adjacent levels are not related by disjoint rewrites".to_owned(),
            ));
        }
        for (mid, witness) in rewrites {
            steps.push(pres.letters.word_from_indices(mid).expect("letter symbols"));
            witnesses.push(Some(witness));
        }
    }
    let derivation = Derivation::new(steps, witnesses)?;
    debug_assert_eq!(check_derivation(pres, &derivation), Ok(true));
    Ok(derivation)
}
