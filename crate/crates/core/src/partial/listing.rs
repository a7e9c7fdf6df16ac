//! Incremental listings of `A = [a_k] × ⋯ × [a_2]`.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{DcellError, Result};
use crate::topology::t;

/// Digit bounds `(a_k, …, a_2)`, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeA {
    bounds: Vec<u64>,
}

impl ShapeA {
    pub fn new(bounds: Vec<u64>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(DcellError::InvalidArgument("shape needs at least one digit".into()));
        }
        if bounds.contains(&0) {
            return Err(DcellError::InvalidArgument("digit bounds must be positive".into()));
        }
        let last = *bounds.last().expect("non-empty");
        if bounds.iter().any(|&b| b < last) {
            return Err(DcellError::InvalidArgument(format!("the last bound {last} must not exceed any other bound")));
        }
        bounds.iter().try_fold(1u64, |acc, &b| acc.checked_mul(b)).ok_or_else(|| DcellError::Overflow("|A|".into()))?;
        Ok(ShapeA { bounds })
    }

    /// Shape whose tuples index the `DCell_1` units of `D_k`: `a_i = t_{i-1} + 1`.
    pub fn dcell(n: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(DcellError::InvalidParams(format!("a DCell shape needs k ≥ 2, got {k}")));
        }
        let bounds = (2..=k).rev().map(|i| t(n, i - 1).map(|s| s + 1)).collect::<Result<Vec<_>>>()?;
        ShapeA::new(bounds)
    }

    pub fn bounds(&self) -> &[u64] {
        &self.bounds
    }

    /// Number of digits, `k − 1`.
    pub fn digits(&self) -> usize {
        self.bounds.len()
    }

    /// `|A|`.
    pub fn size(&self) -> u64 {
        self.bounds.iter().product()
    }

    /// `a_2`.
    pub fn last_bound(&self) -> u64 {
        *self.bounds.last().expect("non-empty")
    }

    /// Mixed-radix value of a full tuple.
    pub fn index(&self, tuple: &[u64]) -> Result<u64> {
        self.check_digits(tuple, true)?;
        Ok(self.code(tuple, &[]))
    }

    /// Tuple with mixed-radix value `index`.
    pub fn tuple(&self, mut index: u64) -> Result<Vec<u64>> {
        if index >= self.size() {
            return Err(DcellError::OutOfRange(format!("index {index} not in 0..{}", self.size())));
        }
        let mut out = vec![0; self.bounds.len()];
        for (slot, &b) in out.iter_mut().zip(&self.bounds).rev() {
            *slot = index % b;
            index /= b;
        }
        Ok(out)
    }

    fn check_digits(&self, digits: &[u64], full: bool) -> Result<()> {
        if digits.len() > self.bounds.len() || (full && digits.len() != self.bounds.len()) {
            return Err(DcellError::InvalidArgument(format!(
                "{} digits given for a shape with {}",
                digits.len(),
                self.bounds.len()
            )));
        }
        for (i, (&d, &b)) in digits.iter().zip(&self.bounds).enumerate() {
            if d >= b {
                return Err(DcellError::OutOfRange(format!("digit {i} is {d}, bound {b}")));
            }
        }
        Ok(())
    }

    /// Value of `head` followed by `tail`, padded with the digit produced by `pad`.
    fn code_with(&self, head: &[u64], tail: &[u64], pad: impl Fn(u64) -> u64) -> u64 {
        let mut code = 0u64;
        for (i, &b) in self.bounds.iter().enumerate() {
            let digit = if i < head.len() {
                head[i]
            } else if i - head.len() < tail.len() {
                tail[i - head.len()]
            } else {
                pad(b)
            };
            code = code * b + digit;
        }
        code
    }

    fn code(&self, head: &[u64], tail: &[u64]) -> u64 {
        self.code_with(head, tail, |_| 0)
    }
}

impl fmt::Display for ShapeA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bounds.iter().map(|b| format!("[{b}]")).collect();
        write!(f, "{}", parts.join("×"))
    }
}

/// Leading digits `(α_k, …, α_{l+1})` of some tuple; the empty prefix is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Prefix(pub Vec<u64>);

impl Prefix {
    pub fn root() -> Self {
        Prefix(Vec::new())
    }

    pub fn new(digits: Vec<u64>) -> Self {
        Prefix(digits)
    }

    pub fn digits(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u64) -> Prefix {
        let mut d = self.0.clone();
        d.push(i);
        Prefix(d)
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Outcome of a `K_c`-connectedness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KcReport {
    pub connected: bool,
    /// A prefix `α'` with `α'1` non-empty and `α'(c−1)` empty.
    pub witness: Option<Prefix>,
}

/// On-disk form of a listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListingFile {
    pub shape: Vec<u64>,
    pub listed: Vec<Vec<u64>>,
}

/// The indicator `φ` over `A` with the tuples in the order they were listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Listing {
    shape: ShapeA,
    listed: HashSet<u64>,
    order: Vec<Vec<u64>>,
}

impl Listing {
    pub fn new(shape: ShapeA) -> Self {
        Listing { shape, listed: HashSet::new(), order: Vec::new() }
    }

    /// Fresh listing advanced by `d` calls to [`Listing::next`].
    pub fn with_calls(shape: ShapeA, d: u64) -> Result<Self> {
        let mut l = Listing::new(shape);
        for _ in 0..d {
            l.next()?;
        }
        Ok(l)
    }

    pub fn shape(&self) -> &ShapeA {
        &self.shape
    }

    /// Number of listed tuples.
    pub fn d(&self) -> u64 {
        self.order.len() as u64
    }

    /// Listed tuples in listing order.
    pub fn listed(&self) -> &[Vec<u64>] {
        &self.order
    }

    pub fn is_listed(&self, tuple: &[u64]) -> bool {
        self.shape.check_digits(tuple, true).is_ok() && self.listed.contains(&self.shape.code(tuple, &[]))
    }

    pub fn is_listed_index(&self, index: u64) -> bool {
        self.listed.contains(&index)
    }

    pub fn is_complete(&self) -> bool {
        self.order.len() as u64 == self.shape.size()
    }

    /// Sets `φ(tuple) = 1` directly, bypassing the enumeration order.
    pub fn mark(&mut self, tuple: &[u64]) -> Result<()> {
        let code = self.shape.index(tuple)?;
        if self.listed.insert(code) {
            self.order.push(tuple.to_vec());
        }
        Ok(())
    }

    fn phi(&self, head: &[u64], tail: &[u64]) -> bool {
        self.listed.contains(&self.shape.code(head, tail))
    }

    fn empty_at(&self, head: &[u64], tail: &[u64]) -> bool {
        !self.phi(head, tail)
    }

    fn full_at(&self, head: &[u64], tail: &[u64]) -> bool {
        self.listed.contains(&self.shape.code_with(head, tail, |b| b - 1))
    }

    /// Whether no listed tuple starts with `p`.
    pub fn is_empty_prefix(&self, p: &Prefix) -> Result<bool> {
        self.shape.check_digits(p.digits(), false)?;
        Ok(self.empty_at(p.digits(), &[]))
    }

    /// Whether every tuple starting with `p` is listed.
    pub fn is_full_prefix(&self, p: &Prefix) -> Result<bool> {
        self.shape.check_digits(p.digits(), false)?;
        Ok(self.full_at(p.digits(), &[]))
    }

    /// Lists the next tuple and returns it.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Result<Vec<u64>> {
        if self.full_at(&[], &[]) {
            return Err(DcellError::Exhausted);
        }
        let last = self.shape.digits() - 1;
        let a2 = self.shape.last_bound();
        let mut prefix: Vec<u64> = Vec::with_capacity(last + 1);
        loop {
            let pos = prefix.len();
            let bound = self.shape.bounds[pos];
            let mut m = (0..bound).find(|&i| self.empty_at(&prefix, &[i])).unwrap_or(bound);
            if pos == last {
                if m == bound {
                    return Err(DcellError::Invariant(format!("no empty tuple under {}", Prefix(prefix))));
                }
                prefix.push(m);
                self.mark(&prefix)?;
                return Ok(prefix);
            }
            if m >= a2 {
                m = (0..bound)
                    .find(|&i| !self.full_at(&prefix, &[i]))
                    .ok_or_else(|| DcellError::Invariant(format!("{} has no open child", Prefix(prefix.clone()))))?;
            }
            prefix.push(m);
        }
    }

    fn check_c(&self, c: u64) -> Result<()> {
        if c == 0 || c > self.shape.last_bound() {
            return Err(DcellError::InvalidArgument(format!("c = {c} must lie in 1..={}", self.shape.last_bound())));
        }
        Ok(())
    }

    /// Checks that `α'1` non-empty implies `α'(c−1)` non-empty for every prefix.
    pub fn is_kc_connected(&self, c: u64) -> Result<KcReport> {
        self.check_c(c)?;
        let mut stack = vec![Vec::new()];
        while let Some(p) = stack.pop() {
            let bound = self.shape.bounds[p.len()];
            // prefixes with fewer than c children are skipped
            if bound > 1 && c - 1 < bound && !self.empty_at(&p, &[1]) && self.empty_at(&p, &[c - 1]) {
                return Ok(KcReport { connected: false, witness: Some(Prefix(p)) });
            }
            if p.len() + 1 < self.shape.digits() {
                for i in (0..bound).rev() {
                    if !self.empty_at(&p, &[i]) {
                        let mut child = p.clone();
                        child.push(i);
                        stack.push(child);
                    }
                }
            }
        }
        Ok(KcReport { connected: true, witness: None })
    }

    /// Calls [`Listing::next`] until the listing is `K_c`-connected and
    /// returns the number of calls.
    pub fn make_kc_connected(&mut self, c: u64) -> Result<u64> {
        let mut calls = 0;
        while !self.is_kc_connected(c)?.connected {
            self.next()?;
            calls += 1;
        }
        Ok(calls)
    }

    pub fn to_file(&self) -> ListingFile {
        ListingFile { shape: self.shape.bounds.clone(), listed: self.order.clone() }
    }

    pub fn from_file(file: &ListingFile) -> Result<Self> {
        let mut l = Listing::new(ShapeA::new(file.shape.clone())?);
        for tuple in &file.listed {
            l.mark(tuple)?;
        }
        Ok(l)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.to_file()).map_err(|e| DcellError::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ListingFile = serde_json::from_str(text).map_err(|e| DcellError::Parse(e.to_string()))?;
        Listing::from_file(&file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| DcellError::Io(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| DcellError::Io(e.to_string()))?;
        Listing::from_json(&text)
    }
}
