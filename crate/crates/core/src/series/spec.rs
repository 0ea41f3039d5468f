use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Most parameters a spec may declare; each exponent occupies one byte of a
/// packed [`Mono`].
pub const MAX_PARAMS: usize = 8;
/// Largest admissible per-parameter cap. Keeps the sum of two in-cap
/// exponents inside one byte.
pub const MAX_CAP: u32 = 127;
const MAX_BOX: usize = 1 << 22;

/// Declared free parameters and their retained-degree caps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSpec {
    names: Vec<String>,
    caps: Vec<u32>,
    strides: Vec<usize>,
    box_size: usize,
}

impl ParamSpec {
    pub fn new<S: AsRef<str>>(params: &[(S, u32)]) -> Result<Arc<Self>> {
        if params.len() > MAX_PARAMS {
            return Err(Error::Spec(format!("at most {MAX_PARAMS} parameters are supported")));
        }
        let mut names = Vec::with_capacity(params.len());
        let mut caps = Vec::with_capacity(params.len());
        for (name, cap) in params {
            let name = name.as_ref();
            if name.is_empty() || name == "q" {
                return Err(Error::Spec(format!("invalid parameter name {name:?}")));
            }
            if names.iter().any(|n: &String| n == name) {
                return Err(Error::Spec(format!("duplicate parameter `{name}`")));
            }
            if *cap > MAX_CAP {
                return Err(Error::Spec(format!("cap {cap} for `{name}` exceeds {MAX_CAP}")));
            }
            names.push(name.to_string());
            caps.push(*cap);
        }
        let mut strides = vec![0; caps.len()];
        let mut box_size = 1usize;
        for i in (0..caps.len()).rev() {
            strides[i] = box_size;
            box_size = box_size
                .checked_mul(caps[i] as usize + 1)
                .filter(|&b| b <= MAX_BOX)
                .ok_or_else(|| Error::Spec("too many parameter monomials".into()))?;
        }
        Ok(Arc::new(ParamSpec { names, caps, strides, box_size }))
    }

    /// The parameter-free spec.
    pub fn empty() -> Arc<Self> {
        Self::new::<&str>(&[]).expect("empty spec is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn cap(&self, i: usize) -> u32 {
        self.caps[i]
    }

    pub fn max_cap(&self) -> u32 {
        self.caps.iter().copied().max().unwrap_or(0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownParam(name.to_string()))
    }

    pub(crate) fn box_size(&self) -> usize {
        self.box_size
    }

    pub(crate) fn dense_index(&self, m: Mono) -> usize {
        let mut idx = 0;
        for (i, s) in self.strides.iter().enumerate() {
            idx += m.exp(i) as usize * s;
        }
        idx
    }

    pub(crate) fn mono_at(&self, mut idx: usize) -> Mono {
        let mut m = Mono::ONE;
        for (i, s) in self.strides.iter().enumerate() {
            m = m.with_exp(i, (idx / s) as u32);
            idx %= s;
        }
        m
    }

    /// Monomial from an exponent vector, checked against the caps.
    pub fn mono(&self, exps: &[u32]) -> Result<Mono> {
        if exps.len() != self.len() {
            return Err(Error::Spec(format!(
                "exponent vector has {} entries, spec declares {}",
                exps.len(),
                self.len()
            )));
        }
        let mut m = Mono::ONE;
        for (i, &e) in exps.iter().enumerate() {
            if e > self.caps[i] {
                return Err(Error::Cap(format!("exponent {e} of `{}` exceeds cap {}", self.names[i], self.caps[i])));
            }
            m = m.with_exp(i, e);
        }
        Ok(m)
    }

    /// Spec with the same names and caps replaced.
    pub fn with_caps(&self, caps: &[u32]) -> Result<Arc<Self>> {
        let pairs: Vec<(&str, u32)> = self.names.iter().map(String::as_str).zip(caps.iter().copied()).collect();
        if pairs.len() != self.len() {
            return Err(Error::Spec("cap vector length mismatch".into()));
        }
        Self::new(&pairs)
    }

    /// Renders a monomial as `b^2*d`, or `1` for the empty monomial.
    pub fn render(&self, m: Mono) -> String {
        let mut parts = Vec::new();
        for (i, name) in self.names.iter().enumerate() {
            match m.exp(i) {
                0 => {}
                1 => parts.push(name.clone()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Parameter monomial with exponents packed one byte per parameter, first
/// parameter in the most significant byte, so the derived ordering is the
/// lexicographic order on exponent vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    #[inline]
    fn shift(i: usize) -> u32 {
        (8 * (MAX_PARAMS - 1 - i)) as u32
    }

    #[inline]
    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> Self::shift(i)) & 0xff) as u32
    }

    #[inline]
    pub fn with_exp(self, i: usize, e: u32) -> Mono {
        let s = Self::shift(i);
        Mono((self.0 & !(0xff << s)) | ((e as u64 & 0xff) << s))
    }

    /// Product of monomials. Callers keep exponents within [`MAX_CAP`].
    #[inline]
    pub fn mul(self, other: Mono) -> Mono {
        Mono(self.0 + other.0)
    }

    #[inline]
    pub fn within(self, caps: &[u32]) -> bool {
        caps.iter().enumerate().all(|(i, &c)| self.exp(i) <= c)
    }

    pub fn exps(self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exp(i)).collect()
    }

    pub fn degree(self, n: usize) -> u32 {
        (0..n).map(|i| self.exp(i)).sum()
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps(MAX_PARAMS))
    }
}
