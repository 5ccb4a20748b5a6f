//! Finite group presentations: parsing, the length `ℓ(P)`, triangularization,
//! and abelianized presentation matrices.
//!
//! Grammar: `<g1,g2,... | w1, w2, ...>`. Generators are ASCII identifiers.
//! The inverse of a one-letter generator `a` is written `A`; multi-letter
//! generators use `name^-1`. Whitespace is insignificant. Words tokenize by
//! greedy longest match against the declared generator names; the printer
//! inserts spaces between atoms whenever a multi-letter generator is present,
//! so `parse ∘ print` is the identity on valid presentations.

use crate::abelian_bound::IntMatrix;
use std::fmt;

/// One letter of a word: a generator index and a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    /// `false` = the generator, `true` = its inverse.
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Self { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Self { gen: self.gen, inv: !self.inv }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

/// A word in the generators, not necessarily freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Free reduction: cancel adjacent `x x⁻¹` pairs until none remain.
    /// Idempotent.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last().is_some_and(|&last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }
}

/// A finite presentation: a generator count, display names, and relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generator_names: Vec<String>,
    pub relators: Vec<Word>,
}

/// A presentation in which every relator has exactly three letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularPresentation(Presentation);

impl TriangularPresentation {
    pub fn as_presentation(&self) -> &Presentation {
        &self.0
    }

    pub fn into_presentation(self) -> Presentation {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresentationError {
    /// Parse failure with a byte offset into the input.
    Syntax { position: usize, message: String },
    /// A word referenced a name outside the generator list.
    UnknownGenerator { position: usize, name: String },
    /// Relator at this index is empty (or freely reduces to the empty word).
    EmptyRelator { index: usize },
    /// Letter with a generator index outside the presentation.
    GeneratorIndexOutOfRange { index: usize, count: usize },
    /// Internal iteration guard tripped; indicates malformed input scale.
    BudgetExceeded,
}

impl fmt::Display for PresentationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax { position, message } => {
                write!(f, "syntax error at byte {position}: {message}")
            }
            Self::UnknownGenerator { position, name } => {
                write!(f, "unknown generator `{name}` at byte {position}")
            }
            Self::EmptyRelator { index } => write!(f, "relator {index} is empty after reduction"),
            Self::GeneratorIndexOutOfRange { index, count } => {
                write!(f, "generator index {index} out of range (count {count})")
            }
            Self::BudgetExceeded => write!(f, "triangularization iteration budget exceeded"),
        }
    }
}

impl std::error::Error for PresentationError {}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let count = generator_names.len();
        for w in &relators {
            for l in &w.0 {
                if l.gen >= count {
                    return Err(PresentationError::GeneratorIndexOutOfRange {
                        index: l.gen,
                        count,
                    });
                }
            }
        }
        Ok(Self { generator_names, relators })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    /// `ℓ(P) = Σ ℓ(r_i)`, measured on freely reduced relators.
    pub fn length(&self) -> usize {
        self.relators.iter().map(|r| r.reduced().len()).sum()
    }

    /// Entry `(i, j)` is the exponent sum of generator `j` in relator `i`.
    pub fn abelianization_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; self.generator_count()];
                for l in &r.0 {
                    row[l.gen] += if l.inv { -1 } else { 1 };
                }
                row
            })
            .collect();
        if rows.is_empty() {
            IntMatrix::new(0, self.generator_count())
        } else {
            IntMatrix::from_rows(&rows)
        }
    }

    pub fn is_triangular(&self) -> bool {
        self.relators.iter().all(|r| r.reduced().len() == 3)
    }
}

// ---------------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------------

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Parse a presentation from the `<gens | relators>` grammar.
pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
    let bytes: Vec<char> = text.chars().collect();
    let syntax = |pos: usize, msg: &str| PresentationError::Syntax {
        position: pos,
        message: msg.to_string(),
    };

    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_whitespace() {
            *i += 1;
        }
    };

    skip_ws(&mut i);
    if i >= bytes.len() || bytes[i] != '<' {
        return Err(syntax(i, "expected `<`"));
    }
    i += 1;

    // Generator list.
    let mut names: Vec<String> = Vec::new();
    loop {
        skip_ws(&mut i);
        if i < bytes.len() && bytes[i] == '|' {
            break;
        }
        if i >= bytes.len() {
            return Err(syntax(i, "unterminated generator list"));
        }
        if !is_ident_start(bytes[i]) {
            return Err(syntax(i, "expected generator name"));
        }
        let start = i;
        while i < bytes.len() && is_ident_char(bytes[i]) {
            i += 1;
        }
        let name: String = bytes[start..i].iter().collect();
        if names.contains(&name) {
            return Err(syntax(start, "duplicate generator name"));
        }
        names.push(name);
        skip_ws(&mut i);
        match bytes.get(i) {
            Some(',') => i += 1,
            Some('|') => {}
            _ => return Err(syntax(i, "expected `,` or `|`")),
        }
    }
    i += 1; // consume '|'

    // Relator words, comma separated, possibly empty list.
    let mut relators: Vec<Word> = Vec::new();
    let mut current: Vec<Letter> = Vec::new();
    let mut saw_any_atom = false;
    loop {
        skip_ws(&mut i);
        match bytes.get(i) {
            None => return Err(syntax(i, "unterminated presentation, expected `>`")),
            Some('>') => {
                if saw_any_atom || !relators.is_empty() {
                    relators.push(Word(current));
                }
                i += 1;
                break;
            }
            Some(',') => {
                relators.push(Word(std::mem::take(&mut current)));
                saw_any_atom = false;
                i += 1;
            }
            Some(&c) if is_ident_start(c) => {
                // Greedy longest match against generator names; a single
                // uppercase letter whose lowercase twin is a generator is
                // that generator's inverse.
                let mut best: Option<(usize, usize, bool)> = None; // (gen, len, inv)
                for (g, name) in names.iter().enumerate() {
                    let nlen = name.chars().count();
                    if bytes[i..].starts_with(&name.chars().collect::<Vec<_>>()[..])
                        && best.is_none_or(|(_, blen, _)| nlen > blen)
                    {
                        best = Some((g, nlen, false));
                    }
                }
                if best.is_none() && c.is_ascii_uppercase() {
                    let lower = c.to_ascii_lowercase().to_string();
                    if let Some(g) = names.iter().position(|n| *n == lower) {
                        best = Some((g, 1, true));
                    }
                }
                let Some((g, nlen, mut inv)) = best else {
                    let start = i;
                    while i < bytes.len() && is_ident_char(bytes[i]) {
                        i += 1;
                    }
                    return Err(PresentationError::UnknownGenerator {
                        position: start,
                        name: bytes[start..i].iter().collect(),
                    });
                };
                i += nlen;
                // Optional `^-1` suffix.
                if bytes.get(i) == Some(&'^') {
                    if bytes.get(i + 1) == Some(&'-') && bytes.get(i + 2) == Some(&'1') {
                        inv = !inv;
                        i += 3;
                    } else {
                        return Err(syntax(i, "expected `^-1`"));
                    }
                }
                current.push(Letter::new(g, inv));
                saw_any_atom = true;
            }
            _ => return Err(syntax(i, "unexpected character in relator")),
        }
    }
    skip_ws(&mut i);
    if i != bytes.len() {
        return Err(syntax(i, "trailing input after `>`"));
    }
    Presentation::new(names, relators)
}

/// Render a presentation in the input grammar.
pub fn print(p: &Presentation) -> String {
    let multi = p.generator_names.iter().any(|n| n.chars().count() > 1);
    let atom = |l: &Letter| -> String {
        let name = &p.generator_names[l.gen];
        if l.inv {
            if name.chars().count() == 1 && name.chars().next().unwrap().is_ascii_lowercase() {
                name.to_ascii_uppercase()
            } else {
                format!("{name}^-1")
            }
        } else {
            name.clone()
        }
    };
    let sep = if multi { " " } else { "" };
    let words: Vec<String> = p
        .relators
        .iter()
        .map(|w| w.0.iter().map(&atom).collect::<Vec<_>>().join(sep))
        .collect();
    format!("<{} | {}>", p.generator_names.join(","), words.join(", "))
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print(self))
    }
}

impl fmt::Display for TriangularPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print(&self.0))
    }
}

// ---------------------------------------------------------------------------
// Triangularization
// ---------------------------------------------------------------------------

fn fresh_name(used: &[String]) -> String {
    for c in b'a'..=b'z' {
        let cand = (c as char).to_string();
        if !used.contains(&cand) {
            return cand;
        }
    }
    let mut k = 1usize;
    loop {
        let cand = format!("g{k}");
        if !used.contains(&cand) {
            return cand;
        }
        k += 1;
    }
}

/// Produce a triangular presentation of the same group with
/// `ℓ(P′) ≤ 3ℓ(P)`.
///
/// Rules, applied left to right until stable:
/// - a relator that freely reduces to a single letter makes its generator
///   trivial: delete the generator everywhere;
/// - a two-letter relator on distinct generators, `x^e y^f`, substitutes
///   `y := x^{−ef}` and removes `y`;
/// - a two-letter relator `x^e x^e` gets a fresh generator `b` with relators
///   `x^e x^e b` and `x^e b x^{−e}` (the second kills `b`, so the group is
///   unchanged — the stated auxiliary relator `b⁻¹ x^e x^e` would instead
///   present a different group);
/// - a relator `x₁x₂x₃…x_k` of length ≥ 4 splits into `x₁x₂b` and
///   `b⁻¹x₃…x_k` with a fresh generator `b`.
pub fn triangularize(p: &Presentation) -> Result<TriangularPresentation, PresentationError> {
    // Validate: reduced relators must be nonempty.
    let mut names = p.generator_names.clone();
    let mut relators: Vec<Word> = Vec::with_capacity(p.relators.len());
    for (idx, r) in p.relators.iter().enumerate() {
        let red = r.reduced();
        if red.is_empty() {
            return Err(PresentationError::EmptyRelator { index: idx });
        }
        relators.push(red);
    }

    let mut budget = 40 * (p.length() + 8) * (p.relators.len() + p.generator_count() + 8);

    // Phase 1: eliminate relators shorter than 3 letters.
    loop {
        if budget == 0 {
            return Err(PresentationError::BudgetExceeded);
        }
        budget -= 1;

        let Some(idx) = relators.iter().position(|r| r.len() < 3) else {
            break;
        };
        let r = relators[idx].clone();
        match r.len() {
            0 => {
                // Became trivial through substitution; drop it.
                relators.remove(idx);
            }
            1 => {
                // x^e = 1: the generator is trivial.
                let dead = r.0[0].gen;
                relators.remove(idx);
                remove_generator(&mut relators, &mut names, dead, None);
            }
            2 => {
                let (x, y) = (r.0[0], r.0[1]);
                if x.gen != y.gen {
                    // x^e y^f = 1  ⇒  y = x^{-ef}.
                    relators.remove(idx);
                    let repl_inv = x.inv == y.inv; // sign −ef as an inversion flag
                    remove_generator(
                        &mut relators,
                        &mut names,
                        y.gen,
                        Some(Letter { gen: x.gen, inv: repl_inv }),
                    );
                } else {
                    // x^e x^e = 1: fresh b with x^e x^e b and x^e b x^{-e}.
                    let b = names.len();
                    names.push(fresh_name(&names));
                    relators[idx] = Word(vec![x, x, Letter::new(b, false)]);
                    relators.insert(idx + 1, Word(vec![x, Letter::new(b, false), x.inverse()]));
                }
            }
            _ => unreachable!("position() only matched len < 3"),
        }
    }

    // Phase 2: split long relators; splits never create short or unreduced
    // relators, so one left-to-right pass per split suffices.
    loop {
        if budget == 0 {
            return Err(PresentationError::BudgetExceeded);
        }
        budget -= 1;

        let Some(idx) = relators.iter().position(|r| r.len() > 3) else {
            break;
        };
        let r = relators[idx].clone();
        let b = names.len();
        names.push(fresh_name(&names));
        let head = Word(vec![r.0[0], r.0[1], Letter::new(b, false)]);
        let mut tail = vec![Letter::new(b, true)];
        tail.extend_from_slice(&r.0[2..]);
        relators[idx] = head;
        relators.insert(idx + 1, Word(tail));
    }

    debug_assert!(relators.iter().all(|r| r.reduced().len() == 3));
    Ok(TriangularPresentation(Presentation { generator_names: names, relators }))
}

/// Substitute `dead := replacement` (or the empty word when `None`) in every
/// relator, reduce, and drop the generator, shifting higher indices down.
fn remove_generator(
    relators: &mut [Word],
    names: &mut Vec<String>,
    dead: usize,
    replacement: Option<Letter>,
) {
    for r in relators.iter_mut() {
        let mut out: Vec<Letter> = Vec::with_capacity(r.0.len());
        for &l in &r.0 {
            if l.gen == dead {
                if let Some(rep) = replacement {
                    // (x^s) with s the letter's sign: replacement^s.
                    out.push(if l.inv { rep.inverse() } else { rep });
                }
            } else {
                out.push(l);
            }
        }
        *r = Word(out).reduced();
    }
    names.remove(dead);
    for r in relators.iter_mut() {
        for l in r.0.iter_mut() {
            if l.gen > dead {
                l.gen -= 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Random presentations for the suites
// ---------------------------------------------------------------------------

/// Seeded random presentation: up to `max_gens` generators and `max_relators`
/// nonempty freely reduced relators of length at most `max_len`.
pub fn random_presentation(
    rng: &mut crate::rng::SplitMix64,
    max_gens: usize,
    max_relators: usize,
    max_len: usize,
) -> Presentation {
    let gens = rng.below(max_gens as u64) as usize + 1;
    let names: Vec<String> = (0..gens)
        .map(|i| ((b'a' + (i % 26) as u8) as char).to_string())
        .collect();
    let relator_count = rng.below(max_relators as u64 + 1) as usize;
    let mut relators = Vec::with_capacity(relator_count);
    for _ in 0..relator_count {
        let len = rng.below(max_len as u64) as usize + 1;
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let l = Letter::new(rng.below(gens as u64) as usize, rng.chance(0.5));
            if letters.last().is_some_and(|&last| last.cancels(l)) {
                continue; // keep the word freely reduced as built
            }
            letters.push(l);
        }
        relators.push(Word(letters));
    }
    Presentation { generator_names: names, relators }
}
