//! Polynomial codec over the integers mod 256.
//!
//! Two encrypted pixels `(p2, p1)` become the three coefficients of
//!
//! ```text
//! f(x) = p2*(x + id)^2 + p1*(x + id)   (mod 256)
//!      = a2*x^2 + a1*x + a0            (mod 256)
//! ```
//!
//! so that `f(-id) = 0 (mod 256)` by construction. A secret pair `(s2, s1)`
//! maps to `g(x) = s2*x^2 + s1` and is embedded by coefficient-wise addition
//! `H(x) = f(x) + g(x)`. Evaluating the marked triple at `-id` cancels `f`
//! and leaves `H(-id) = s2*id^2 + s1`, which stays below 256 for every
//! mode-valid combination, so extraction is exact plain-integer arithmetic.
//!
//! All operations here are pure functions of their arguments; callers may
//! run them concurrently over disjoint triples.

use crate::error::{Error, Result};

/// Smallest usable public identity.
pub const MIN_ID: u8 = 2;
/// Largest public identity representable by the 4-bit side information.
pub const MAX_ID: u8 = 15;

/// Public identity shared by all three parties: the common root offset of
/// the encoding polynomial. Always within `2..=15` so it fits the 4-bit
/// in-band stamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PublicId(u8);

impl PublicId {
    /// Accepts values in `2..=15`; use [`validate_mode_id`] to narrow
    /// further for a given embedding mode.
    pub fn new(value: u8) -> Result<Self> {
        if (MIN_ID..=MAX_ID).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::IdOutOfRange(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

/// How many secret bits each embeddable coefficient carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbedMode {
    /// One bit per symbol: `s ∈ {0, 1}`, id in `2..=15`.
    OneBit,
    /// Two bits per symbol: `s ∈ {0..=3}`, id in `4..=9`.
    TwoBit,
}

impl EmbedMode {
    pub fn bits_per_symbol(self) -> u8 {
        match self {
            EmbedMode::OneBit => 1,
            EmbedMode::TwoBit => 2,
        }
    }

    /// Largest symbol in this mode's alphabet.
    pub fn max_symbol(self) -> u8 {
        match self {
            EmbedMode::OneBit => 1,
            EmbedMode::TwoBit => 3,
        }
    }

    /// Identities compatible with this mode. The bounds come from the two
    /// extraction constraints `s1 < id` and `s2*id^2 < 256`.
    pub fn id_range(self) -> std::ops::RangeInclusive<u8> {
        match self {
            EmbedMode::OneBit => 2..=15,
            EmbedMode::TwoBit => 4..=9,
        }
    }

    /// Inverse of [`EmbedMode::bits_per_symbol`], used by the container
    /// format and the CLI.
    pub fn from_bits(bits: u8) -> Result<Self> {
        match bits {
            1 => Ok(EmbedMode::OneBit),
            2 => Ok(EmbedMode::TwoBit),
            other => Err(Error::Parse(format!(
                "embed mode must be 1 or 2 bits, got {other}"
            ))),
        }
    }
}

/// True iff `id` may be used with `mode`.
pub fn validate_mode_id(mode: EmbedMode, id: PublicId) -> bool {
    mode.id_range().contains(&id.value())
}

/// A pair of encrypted-domain pixel bytes forming one encoding unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlainGroup {
    pub p2: u8,
    pub p1: u8,
}

/// Coefficients of `f(x) = a2*x^2 + a1*x + a0 (mod 256)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodedTriple {
    pub a2: u8,
    pub a1: u8,
    pub a0: u8,
}

/// Coefficients of `H(x) = f(x) + g(x) (mod 256)` after secret addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkedTriple {
    pub c2: u8,
    pub c1: u8,
    pub c0: u8,
}

/// Two secret symbols, each within the active mode's alphabet.
///
/// Construction validates the symbols against `(mode, id)`, so a value of
/// this type always satisfies `s1 < id` and `s2*id^2 < 256`, the conditions
/// for exact extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecretPair {
    s2: u8,
    s1: u8,
}

impl SecretPair {
    pub fn new(s2: u8, s1: u8, mode: EmbedMode, id: PublicId) -> Result<Self> {
        if !validate_mode_id(mode, id) {
            return Err(Error::IdModeMismatch {
                id: id.value(),
                bits: mode.bits_per_symbol(),
            });
        }
        let max = mode.max_symbol();
        if s2 > max || s1 > max {
            return Err(Error::SecretOutOfRange {
                s2,
                s1,
                bits: mode.bits_per_symbol(),
            });
        }
        Ok(Self { s2, s1 })
    }

    pub fn s2(self) -> u8 {
        self.s2
    }

    pub fn s1(self) -> u8 {
        self.s1
    }
}

/// Encode two encrypted pixels as the coefficients of
/// `f(x) = p2*(x + id)^2 + p1*(x + id) (mod 256)`.
pub fn encode_group(group: PlainGroup, id: PublicId) -> EncodedTriple {
    let id = u32::from(id.value());
    let p2 = u32::from(group.p2);
    let p1 = u32::from(group.p1);
    EncodedTriple {
        a2: group.p2,
        a1: ((2 * id * p2 + p1) % 256) as u8,
        a0: ((id * id * p2 + id * p1) % 256) as u8,
    }
}

/// Add `g(x) = s2*x^2 + s1` coefficient-wise: `c2 = a2 + s2`, `c1 = a1`,
/// `c0 = a0 + s1`, all mod 256. The middle coefficient is never touched.
pub fn embed_secret(triple: EncodedTriple, secret: SecretPair) -> MarkedTriple {
    MarkedTriple {
        c2: triple.a2.wrapping_add(secret.s2),
        c1: triple.a1,
        c0: triple.a0.wrapping_add(secret.s1),
    }
}

/// Subtract the secret back out, the exact inverse of [`embed_secret`].
pub fn strip_secret(triple: MarkedTriple, secret: SecretPair) -> EncodedTriple {
    EncodedTriple {
        a2: triple.c2.wrapping_sub(secret.s2),
        a1: triple.c1,
        a0: triple.c0.wrapping_sub(secret.s1),
    }
}

/// Evaluate `H(-id) = c2*id^2 - c1*id + c0 (mod 256)`, with `-id`
/// represented as `256 - id` in residue arithmetic.
pub fn evaluate_at_neg_id(triple: MarkedTriple, id: PublicId) -> u8 {
    let id = i32::from(id.value());
    let value = i32::from(triple.c2) * id * id - i32::from(triple.c1) * id + i32::from(triple.c0);
    value.rem_euclid(256) as u8
}

/// Recover the embedded secret from a marked triple.
///
/// `H(-id)` equals `s2*id^2 + s1` as a plain integer for every triple
/// produced by [`embed_secret`] under a mode-valid id, so `s1` is the
/// residue mod `id` and `s2` the exact quotient by `id^2`. Non-exact
/// division or symbols outside the mode alphabet mean the triple was
/// tampered with or the wrong `(id, mode)` was supplied.
pub fn extract_secret(triple: MarkedTriple, id: PublicId, mode: EmbedMode) -> Result<SecretPair> {
    let value = u32::from(evaluate_at_neg_id(triple, id));
    let idv = u32::from(id.value());
    let id_sq = idv * idv;
    let s1 = value % idv;
    let rest = value - s1;
    if rest % id_sq != 0 {
        return Err(Error::Corruption(format!(
            "H(-{idv}) = {value} does not split as s2*{id_sq} + s1"
        )));
    }
    let s2 = rest / id_sq;
    let max = u32::from(mode.max_symbol());
    if s2 > max || s1 > max {
        return Err(Error::Corruption(format!(
            "extracted symbols (s2={s2}, s1={s1}) outside the {}-bit alphabet",
            mode.bits_per_symbol()
        )));
    }
    Ok(SecretPair {
        s2: s2 as u8,
        s1: s1 as u8,
    })
}

/// Invert [`encode_group`]: `p2 = a2`, `p1 = a1 - 2*id*p2 (mod 256)`.
///
/// The constant coefficient is redundant given `(a2, a1)`, so it is checked
/// against the recovered pixels as a free integrity signal.
pub fn recover_group(triple: EncodedTriple, id: PublicId) -> Result<PlainGroup> {
    let idv = u32::from(id.value());
    let p2 = triple.a2;
    let p1 = (u32::from(triple.a1) + 256 - (2 * idv * u32::from(p2)) % 256) % 256;
    let expected_a0 = ((idv * idv * u32::from(p2) + idv * p1) % 256) as u8;
    if expected_a0 != triple.a0 {
        return Err(Error::Corruption(format!(
            "constant coefficient {} inconsistent with recovered pixels (expected {expected_a0})",
            triple.a0
        )));
    }
    Ok(PlainGroup { p2, p1: p1 as u8 })
}
