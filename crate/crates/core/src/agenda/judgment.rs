use std::fmt;

/// Maximum number of issues an agenda may declare (two literals per issue in a `u64`).
pub const MAX_ISSUES: usize = 32;

/// Accepted polarity of an issue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// One proposition of the agenda: an issue together with a polarity.
///
/// Encoded as `2 * issue + (polarity == Negative)`, so literal order is
/// issue-major with the positive proposition first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(u16);

impl Literal {
    pub fn new(issue: usize, polarity: Polarity) -> Self {
        debug_assert!(issue < MAX_ISSUES);
        let neg = matches!(polarity, Polarity::Negative) as u16;
        Literal((issue as u16) * 2 + neg)
    }

    pub fn positive(issue: usize) -> Self {
        Self::new(issue, Polarity::Positive)
    }

    pub fn negative(issue: usize) -> Self {
        Self::new(issue, Polarity::Negative)
    }

    pub fn from_index(index: usize) -> Self {
        debug_assert!(index < 2 * MAX_ISSUES);
        Literal(index as u16)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn issue(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn polarity(self) -> Polarity {
        if self.0.is_multiple_of(2) {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Agenda-internal negation; an involution.
    pub fn negate(self) -> Self {
        Literal(self.0 ^ 1)
    }

    pub(crate) fn bit(self) -> u64 {
        1u64 << self.0
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        self.negate()
    }
}

/// A subset of the agenda's literals.
///
/// Both polarities of an issue may be present; rationality is a derived
/// status computed against an [`Agenda`](crate::Agenda), never assumed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct JudgmentSet(u64);

impl JudgmentSet {
    pub const EMPTY: JudgmentSet = JudgmentSet(0);

    pub fn from_bits(bits: u64) -> Self {
        JudgmentSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn from_literals<I: IntoIterator<Item = Literal>>(lits: I) -> Self {
        JudgmentSet(lits.into_iter().fold(0, |acc, l| acc | l.bit()))
    }

    pub fn contains(self, lit: Literal) -> bool {
        self.0 & lit.bit() != 0
    }

    pub fn with(self, lit: Literal) -> Self {
        JudgmentSet(self.0 | lit.bit())
    }

    pub fn without(self, lit: Literal) -> Self {
        JudgmentSet(self.0 & !lit.bit())
    }

    pub fn union(self, other: Self) -> Self {
        JudgmentSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        JudgmentSet(self.0 & other.0)
    }

    pub fn symmetric_difference(self, other: Self) -> Self {
        JudgmentSet(self.0 ^ other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Literals in index order.
    pub fn literals(self) -> impl Iterator<Item = Literal> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            Some(Literal(i as u16))
        })
    }

    /// The literals this set holds on `issue`, as a two-bit pattern.
    pub fn on_issue(self, issue: usize) -> u8 {
        ((self.0 >> (2 * issue)) & 0b11) as u8
    }

    /// Bit-pair encoding: for each issue, `1`/`0` for the positive then the
    /// negative literal. Length `2k`.
    pub fn to_bitpairs(self, k: usize) -> String {
        (0..2 * k)
            .map(|i| if self.0 >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Compact per-issue encoding of length `k`: `1` positive only, `0`
    /// negative only, `-` undecided, `*` both.
    pub fn to_issue_string(self, k: usize) -> String {
        (0..k)
            .map(|i| match self.on_issue(i) {
                0b01 => '1',
                0b10 => '0',
                0b00 => '-',
                _ => '*',
            })
            .collect()
    }
}

impl fmt::Debug for JudgmentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.literals().map(|l| l.index())).finish()
    }
}
