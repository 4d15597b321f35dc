//! Binary linear codes of length 2^n attached to functions on GF(2^n).
//!
//! A code is stored as a generator set of packed bit rows plus a lazily
//! computed reduced row-echelon form (the canonical object behind equality,
//! membership, and dimension). The code of a function f is spanned by the
//! all-ones word, the words x -> Tr(b_i x) and the words x -> Tr(b_i f(x)),
//! with b_i = u^{i-1} the polynomial basis and coordinates in the integer
//! order of field elements.

use crate::bitrow;
use crate::error::{Error, Result};
use crate::funcspace::FunctionTable;
use crate::gf2n::{FieldElement, FieldSpec};
use crate::permgrp::Permutation;
use std::collections::HashMap;
use std::sync::OnceLock;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Rref {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn compute_rref(generators: &[Vec<u64>], length: usize) -> Rref {
    let mut rows: Vec<Vec<u64>> = generators.to_vec();
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..length {
        let Some(idx) = rows.iter().position(|r| bitrow::get(r, col)) else {
            continue;
        };
        let pivot_row = rows.swap_remove(idx);
        for r in rows.iter_mut() {
            if bitrow::get(r, col) {
                bitrow::xor_assign(r, &pivot_row);
            }
        }
        for r in out.iter_mut() {
            if bitrow::get(r, col) {
                bitrow::xor_assign(r, &pivot_row);
            }
        }
        out.push(pivot_row);
        pivots.push(col);
        rows.retain(|r| !bitrow::is_zero(r));
        if rows.is_empty() {
            break;
        }
    }
    Rref { rows: out, pivots }
}

/// A GF(2) row space of length 2^n, with the field recorded so coordinates
/// can be read as field elements.
#[derive(Debug)]
pub struct BinaryCode {
    field: FieldSpec,
    length: usize,
    rows: Vec<Vec<u64>>,
    rref: OnceLock<Rref>,
}

impl Clone for BinaryCode {
    fn clone(&self) -> Self {
        let rref = OnceLock::new();
        if let Some(r) = self.rref.get() {
            let _ = rref.set(r.clone());
        }
        BinaryCode {
            field: self.field,
            length: self.length,
            rows: self.rows.clone(),
            rref,
        }
    }
}

impl BinaryCode {
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<u64>>) -> Self {
        let length = field.size();
        let words = bitrow::words_for(length);
        assert!(rows.iter().all(|r| r.len() == words), "row width mismatch");
        BinaryCode {
            field,
            length,
            rows,
            rref: OnceLock::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// The generator rows as constructed (not necessarily independent).
    pub fn generator_rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    fn rref(&self) -> &Rref {
        self.rref
            .get_or_init(|| compute_rref(&self.rows, self.length))
    }

    pub fn rref_rows(&self) -> &[Vec<u64>] {
        &self.rref().rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.rref().pivots
    }

    /// GF(2) rank of the generator set.
    pub fn dimension(&self) -> usize {
        self.rref().rows.len()
    }

    /// Membership via reduction against the cached echelon form.
    pub fn contains_word(&self, word: &[u64]) -> bool {
        let r = self.rref();
        let mut cur = word.to_vec();
        for (row, &p) in r.rows.iter().zip(&r.pivots) {
            if bitrow::get(&cur, p) {
                bitrow::xor_assign(&mut cur, row);
            }
        }
        bitrow::is_zero(&cur)
    }

    /// Row spaces coincide (canonical echelon forms are equal).
    pub fn code_equal(&self, other: &BinaryCode) -> Result<bool> {
        if self.length != other.length {
            return Err(Error::LengthMismatch(self.length, other.length));
        }
        Ok(self.rref().rows == other.rref().rows)
    }

    /// Coordinate relabeling: each row r becomes x -> r[p(x)].
    pub fn permute_code(&self, p: &Permutation) -> Result<BinaryCode> {
        if p.size() != self.length {
            return Err(Error::SizeMismatch {
                perm: p.size(),
                code: self.length,
            });
        }
        let images = p.images();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = bitrow::zero_row(self.length);
                for (x, &img) in images.iter().enumerate() {
                    if bitrow::get(r, img as usize) {
                        bitrow::set(&mut out, x, true);
                    }
                }
                out
            })
            .collect();
        Ok(BinaryCode::from_rows(self.field, rows))
    }

    /// Weight -> count table of the whole code, streamed with a Gray-code
    /// walk over the echelon rows; None when 2^dim is too large to stream.
    pub fn weight_distribution(&self) -> Option<Vec<u64>> {
        let dim = self.dimension();
        if dim > 20 {
            return None;
        }
        let rows = &self.rref().rows;
        let mut counts = vec![0u64; self.length + 1];
        let mut cur = bitrow::zero_row(self.length);
        counts[0] += 1;
        for i in 1u64..(1u64 << dim) {
            let flip = i.trailing_zeros() as usize;
            bitrow::xor_assign(&mut cur, &rows[flip]);
            counts[bitrow::weight(&cur)] += 1;
        }
        Some(counts)
    }

    /// Canonical dump: header line then the echelon rows over {0,1}.
    pub fn to_dump_string(&self) -> String {
        let r = self.rref();
        let mut out = format!(
            "binarycode n={} len={} dim={}\n",
            self.field.n(),
            self.length,
            r.rows.len()
        );
        for row in &r.rows {
            for x in 0..self.length {
                out.push(if bitrow::get(row, x) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Parses a dump. The header records only the degree; the field (and so
    /// the coordinate <-> element identification) defaults to the built-in
    /// modulus unless one is supplied.
    pub fn parse_dump(text: &str, field: Option<FieldSpec>) -> Result<BinaryCode> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty code dump".into()))?;
        let mut words = header.split_whitespace();
        if words.next() != Some("binarycode") {
            return Err(Error::Parse("dump must start with 'binarycode'".into()));
        }
        let mut n = None;
        let mut len = None;
        let mut dim = None;
        for w in words {
            let (key, val) = w
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header item {w:?}")))?;
            let v: usize = val
                .parse()
                .map_err(|_| Error::Parse(format!("bad header value {w:?}")))?;
            match key {
                "n" => n = Some(v),
                "len" => len = Some(v),
                "dim" => dim = Some(v),
                _ => return Err(Error::Parse(format!("unknown header key {key:?}"))),
            }
        }
        let (n, len, dim) = match (n, len, dim) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(Error::Parse("header needs n=, len=, dim=".into())),
        };
        let field = match field {
            Some(f) => f,
            None => FieldSpec::new(n as u32, None)?,
        };
        if field.n() as usize != n || field.size() != len {
            return Err(Error::Parse(format!(
                "header n={n} len={len} does not match field {field}"
            )));
        }
        let mut rows = Vec::with_capacity(dim);
        for line in lines {
            let line = line.trim();
            let mut row = bitrow::zero_row(len);
            if line.len() != len {
                return Err(Error::Parse(format!(
                    "row has {} symbols, expected {len}",
                    line.len()
                )));
            }
            for (x, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => bitrow::set(&mut row, x, true),
                    _ => return Err(Error::Parse(format!("bad symbol {ch:?} in row"))),
                }
            }
            rows.push(row);
        }
        if rows.len() != dim {
            return Err(Error::Parse(format!(
                "dump declares dim={dim} but has {} rows",
                rows.len()
            )));
        }
        Ok(BinaryCode::from_rows(field, rows))
    }
}

/// The word x -> Tr(alpha x) + Tr(beta f(x)) + epsilon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodewordIndex {
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub epsilon: u8,
}

impl CodewordIndex {
    pub fn encode(&self, f: &FunctionTable) -> Result<Vec<u64>> {
        if self.alpha.field() != f.field() || self.beta.field() != f.field() {
            return Err(Error::FieldMismatch);
        }
        let field = f.field();
        let mut row = bitrow::zero_row(field.size());
        for x in field.elements() {
            let bit = (self.alpha * x).trace()
                ^ (self.beta * f.value(x.bits())).trace()
                ^ (self.epsilon & 1);
            if bit == 1 {
                bitrow::set(&mut row, x.bits() as usize, true);
            }
        }
        Ok(row)
    }
}

fn trace_row(
    field: FieldSpec,
    scale: FieldElement,
    through: impl Fn(u32) -> FieldElement,
) -> Vec<u64> {
    let mut row = bitrow::zero_row(field.size());
    for x in 0..field.size() as u32 {
        if (scale * through(x)).trace() == 1 {
            bitrow::set(&mut row, x as usize, true);
        }
    }
    row
}

fn ones_row(length: usize) -> Vec<u64> {
    let mut row = bitrow::zero_row(length);
    for x in 0..length {
        bitrow::set(&mut row, x, true);
    }
    row
}

/// Rows Tr(b_i f(x)) for i = 1..n.
fn function_block(f: &FunctionTable) -> Vec<Vec<u64>> {
    let field = f.field();
    (1..=field.n())
        .map(|i| trace_row(field, field.basis(i), |x| f.value(x)))
        .collect()
}

/// Rows Tr(b_i x) for i = 1..n.
fn coordinate_block(field: FieldSpec) -> Vec<Vec<u64>> {
    (1..=field.n())
        .map(|i| trace_row(field, field.basis(i), |x| field.elem(x)))
        .collect()
}

/// The first-order Reed-Muller code: all-ones word plus the words Tr(b_i x).
pub fn reed_muller_first_order(field: FieldSpec) -> BinaryCode {
    let mut rows = vec![ones_row(field.size())];
    rows.extend(coordinate_block(field));
    BinaryCode::from_rows(field, rows)
}

/// The code generated by the 2n+1 rows (all-ones, Tr(b_i x), Tr(b_i f(x))).
pub fn build_code(f: &FunctionTable) -> BinaryCode {
    let field = f.field();
    let mut rows = vec![ones_row(field.size())];
    rows.extend(coordinate_block(field));
    rows.extend(function_block(f));
    BinaryCode::from_rows(field, rows)
}

/// Outcome of the bounded dual-distance search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualDistance {
    Exact(u32),
    ExceedsCap(u32),
}

/// Sum-indexed witness table: dense array for small dimensions, hash map
/// beyond. A slot keeps its first witness; probing never overwrites.
enum SumTable {
    Arr { occ: Vec<u64>, wit: Vec<u64> },
    Map(HashMap<u64, u64>),
}

impl SumTable {
    fn new(dim: usize) -> Self {
        if dim <= 22 {
            let slots = 1usize << dim;
            SumTable::Arr {
                occ: vec![0u64; slots.div_ceil(64)],
                wit: vec![0u64; slots],
            }
        } else {
            SumTable::Map(HashMap::new())
        }
    }

    /// Returns the stored witness when the key is already present, otherwise
    /// inserts and returns None.
    fn probe_or_insert(&mut self, key: u64, witness: u64) -> Option<u64> {
        match self {
            SumTable::Arr { occ, wit } => {
                let k = key as usize;
                if occ[k / 64] >> (k % 64) & 1 == 1 {
                    Some(wit[k])
                } else {
                    occ[k / 64] |= 1 << (k % 64);
                    wit[k] = witness;
                    None
                }
            }
            SumTable::Map(m) => match m.entry(key) {
                std::collections::hash_map::Entry::Occupied(e) => Some(*e.get()),
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(witness);
                    None
                }
            },
        }
    }

    fn contains(&self, key: u64) -> bool {
        match self {
            SumTable::Arr { occ, .. } => {
                let k = key as usize;
                occ[k / 64] >> (k % 64) & 1 == 1
            }
            SumTable::Map(m) => m.contains_key(&key),
        }
    }
}

impl BinaryCode {
    /// Smallest w <= cap such that w columns of the echelon generator matrix
    /// are dependent (equivalently: the dual code has a weight-w word).
    ///
    /// Stages run in increasing w, which is what makes the single-witness
    /// tables sound: once every dependency of weight < w is ruled out, two
    /// distinct column subsets with equal sums cannot overlap (their
    /// symmetric difference would be a smaller dependency), so any collision
    /// certifies weight exactly w.
    pub fn dual_min_distance(&self, cap: u32) -> Result<DualDistance> {
        if cap > 8 {
            return Err(Error::CapTooLarge(cap));
        }
        let r = self.rref();
        let dim = r.rows.len();
        let ncols = self.length;
        let cols: Vec<u64> = (0..ncols)
            .map(|x| {
                r.rows.iter().enumerate().fold(0u64, |acc, (i, row)| {
                    acc | (bitrow::get(row, x) as u64) << i
                })
            })
            .collect();
        let enc2 = |i: usize, j: usize| (i as u64) << 16 | j as u64;
        let enc3 = |i: usize, j: usize, l: usize| (i as u64) << 32 | (j as u64) << 16 | l as u64;
        let enc4 = |i: usize, j: usize, l: usize, m: usize| {
            (i as u64) << 48 | (j as u64) << 32 | (l as u64) << 16 | m as u64
        };

        if cap >= 1 && cols.contains(&0) {
            return Ok(DualDistance::Exact(1));
        }
        if cap < 2 {
            return Ok(DualDistance::ExceedsCap(cap));
        }
        let mut singles = SumTable::new(dim);
        for (i, &c) in cols.iter().enumerate() {
            if singles.probe_or_insert(c, i as u64).is_some() {
                return Ok(DualDistance::Exact(2));
            }
        }
        if cap < 3 {
            return Ok(DualDistance::ExceedsCap(cap));
        }

        // pairs: probe singles for w=3, self-join for w=4
        let mut pairs = SumTable::new(dim);
        let mut found4 = false;
        for i in 0..ncols {
            for j in (i + 1)..ncols {
                let s = cols[i] ^ cols[j];
                if singles.contains(s) {
                    return Ok(DualDistance::Exact(3));
                }
                if cap >= 4 && !found4 && pairs.probe_or_insert(s, enc2(i, j)).is_some() {
                    found4 = true;
                }
            }
        }
        if found4 {
            return Ok(DualDistance::Exact(4));
        }
        if cap < 5 {
            return Ok(DualDistance::ExceedsCap(cap));
        }

        // triples: probe pairs for w=5, self-join for w=6
        let mut triples = SumTable::new(dim);
        let mut found6 = false;
        for i in 0..ncols {
            for j in (i + 1)..ncols {
                let sij = cols[i] ^ cols[j];
                for (l, &cl) in cols.iter().enumerate().skip(j + 1) {
                    let s = sij ^ cl;
                    if pairs.contains(s) {
                        return Ok(DualDistance::Exact(5));
                    }
                    if cap >= 6 && !found6 && triples.probe_or_insert(s, enc3(i, j, l)).is_some() {
                        found6 = true;
                    }
                }
            }
        }
        if found6 {
            return Ok(DualDistance::Exact(6));
        }
        if cap < 7 {
            return Ok(DualDistance::ExceedsCap(cap));
        }

        // quadruples: probe triples for w=7, self-join for w=8
        let mut quads = SumTable::new(dim);
        let mut found8 = false;
        for i in 0..ncols {
            for j in (i + 1)..ncols {
                let sij = cols[i] ^ cols[j];
                for l in (j + 1)..ncols {
                    let sijl = sij ^ cols[l];
                    for (m, &cm) in cols.iter().enumerate().skip(l + 1) {
                        let s = sijl ^ cm;
                        if triples.contains(s) {
                            return Ok(DualDistance::Exact(7));
                        }
                        if cap >= 8
                            && !found8
                            && quads.probe_or_insert(s, enc4(i, j, l, m)).is_some()
                        {
                            found8 = true;
                        }
                    }
                }
            }
        }
        if found8 {
            return Ok(DualDistance::Exact(8));
        }
        Ok(DualDistance::ExceedsCap(cap))
    }
}

/// n x n GF(2) Gram matrix T_{i,j} = Tr(b_i b_j) and its inverse, as u32
/// bit-rows.
fn gram_inverse(field: FieldSpec) -> Vec<u32> {
    let n = field.n();
    let mut t: Vec<u64> = (1..=n)
        .map(|i| {
            let mut row = 0u64;
            for j in 1..=n {
                if (field.basis(i) * field.basis(j)).trace() == 1 {
                    row |= 1 << (j - 1);
                }
            }
            row
        })
        .collect();
    // augment with the identity in the high bits and eliminate
    for (i, row) in t.iter_mut().enumerate() {
        *row |= 1u64 << (n as usize + i);
    }
    let mut rank = 0usize;
    for col in 0..n as usize {
        let Some(r) = (rank..n as usize).find(|&r| t[r] >> col & 1 == 1) else {
            continue;
        };
        t.swap(rank, r);
        for rr in 0..n as usize {
            if rr != rank && t[rr] >> col & 1 == 1 {
                t[rr] ^= t[rank];
            }
        }
        rank += 1;
    }
    assert_eq!(rank, n as usize, "trace form is nondegenerate");
    (0..n as usize).map(|i| (t[i] >> n) as u32).collect()
}

impl BinaryCode {
    /// Reads a function back out of a code containing the first-order
    /// Reed-Muller code: pick the echelon rows whose pivots are new relative
    /// to C0, pad to n rows, and solve the Gram system per coordinate.
    /// When dimension(C) = 2n+1 the rebuilt code equals C.
    pub fn function_from_code(&self) -> Result<FunctionTable> {
        let field = self.field;
        let n = field.n() as usize;
        let c0 = reed_muller_first_order(field);
        if c0
            .generator_rows()
            .iter()
            .any(|row| !self.contains_word(row))
        {
            return Err(Error::NotSupercode);
        }
        let dim = self.dimension();
        if dim > 2 * n + 1 {
            return Err(Error::TooBig {
                dim,
                max: 2 * n + 1,
            });
        }
        let p0: std::collections::HashSet<usize> = c0.pivots().iter().copied().collect();
        let complement: Vec<&Vec<u64>> = self
            .rref()
            .rows
            .iter()
            .zip(self.pivots())
            .filter(|(_, p)| !p0.contains(p))
            .map(|(row, _)| row)
            .collect();
        debug_assert_eq!(complement.len(), dim - (n + 1));
        let tinv = gram_inverse(field);
        let values = (0..field.size())
            .map(|x| {
                let v = complement.iter().enumerate().fold(0u32, |acc, (i, row)| {
                    acc | (bitrow::get(row, x) as u32) << i
                });
                let bits = tinv.iter().enumerate().fold(0u32, |acc, (j, &ti)| {
                    acc | (((ti & v).count_ones() & 1) << j)
                });
                field.elem(bits)
            })
            .collect();
        FunctionTable::from_values(field, values)
    }
}

/// Gaussian elimination that remembers, for every echelon row, which of the
/// originally inserted rows combine to it. Dependencies pop out as tagged
/// kernel combinations.
struct ComboSolver {
    length: usize,
    rows: Vec<(Vec<u64>, u64, usize)>, // (row, combo over original tags, pivot)
}

impl ComboSolver {
    fn new(length: usize) -> Self {
        ComboSolver {
            length,
            rows: Vec::new(),
        }
    }

    fn reduce(&self, word: &[u64]) -> (Vec<u64>, u64) {
        let mut cur = word.to_vec();
        let mut combo = 0u64;
        for (row, c, p) in &self.rows {
            if bitrow::get(&cur, *p) {
                bitrow::xor_assign(&mut cur, row);
                combo ^= c;
            }
        }
        (cur, combo)
    }

    /// Inserts a tagged row; a row that reduces to zero yields its kernel
    /// combination instead of extending the basis.
    fn insert(&mut self, row: &[u64], tag: u32) -> Option<u64> {
        let (cur, combo) = self.reduce(row);
        let combo = combo ^ (1u64 << tag);
        if bitrow::is_zero(&cur) {
            return Some(combo);
        }
        let pivot = (0..self.length)
            .find(|&i| bitrow::get(&cur, i))
            .expect("nonzero row has a pivot");
        let at = self.rows.partition_point(|(_, _, p)| *p < pivot);
        self.rows.insert(at, (cur, combo, pivot));
        None
    }

    fn express(&self, word: &[u64]) -> Option<u64> {
        let (cur, combo) = self.reduce(word);
        bitrow::is_zero(&cur).then_some(combo)
    }
}

/// Witness that two codes agree: G_g = B1 G_f + B G0' + t 1 over GF(2),
/// with B1 invertible. Rows are n-bit integers, bit j = column j+1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineWitness {
    field: FieldSpec,
    pub b1: Vec<u32>,
    pub b: Vec<u32>,
    pub t: u32,
}

fn is_invertible_rows(rows: &[u32], n: usize) -> bool {
    let mut m: Vec<u32> = rows.to_vec();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(r) = (rank..n).find(|&r| m[r] >> col & 1 == 1) else {
            return false;
        };
        m.swap(rank, r);
        for rr in 0..n {
            if rr != rank && m[rr] >> col & 1 == 1 {
                m[rr] ^= m[rank];
            }
        }
        rank += 1;
    }
    rank == n
}

impl AffineWitness {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Substitutes the witness back into the block equation for the two
    /// codes' canonical function blocks.
    pub fn verify(&self, c: &BinaryCode, d: &BinaryCode) -> bool {
        let n = self.field.n() as usize;
        let (Ok(f), Ok(g)) = (c.function_from_code(), d.function_from_code()) else {
            return false;
        };
        let gf = function_block(&f);
        let gg = function_block(&g);
        let g0 = coordinate_block(self.field);
        let ones = ones_row(c.length());
        if !is_invertible_rows(&self.b1, n) {
            return false;
        }
        for (i, gi) in gg.iter().enumerate().take(n) {
            let mut acc = bitrow::zero_row(c.length());
            for j in 0..n {
                if self.b1[i] >> j & 1 == 1 {
                    bitrow::xor_assign(&mut acc, &gf[j]);
                }
                if self.b[i] >> j & 1 == 1 {
                    bitrow::xor_assign(&mut acc, &g0[j]);
                }
            }
            if self.t >> i & 1 == 1 {
                bitrow::xor_assign(&mut acc, &ones);
            }
            if acc != *gi {
                return false;
            }
        }
        true
    }
}

/// Candidate rows are tried in plain numeric order, so for equal codes the
/// solver lands on the identity matrix rather than some scrambled basis.
fn lex_key(row: u32, _n: usize) -> u32 {
    row
}

/// Finds an affine witness for C = D. Solves the block equation row by row:
/// each row of D's function block is expressed over C's blocks; the per-row
/// freedom is a coset of the kernel W = {w : sum_j w_j (G_f)_j lies in C0},
/// and rows are chosen lexicographically smallest (depth-first with
/// backtracking) subject to B1 staying invertible.
pub fn ea_witness(c: &BinaryCode, d: &BinaryCode) -> Result<AffineWitness> {
    if c.field() != d.field() {
        return Err(Error::FieldMismatch);
    }
    let field = c.field();
    let n = field.n() as usize;
    let f = c.function_from_code()?;
    let g = d.function_from_code()?;
    if !c.code_equal(d)? {
        return Err(Error::NoWitness);
    }
    let gf = function_block(&f);
    let gg = function_block(&g);
    let g0 = coordinate_block(field);
    let ones = ones_row(c.length());

    // tags: 0..n-1 = G0' rows, n = all-ones, n+1..2n = G_f rows
    let mut solver = ComboSolver::new(c.length());
    for (j, row) in g0.iter().enumerate() {
        let dep = solver.insert(row, j as u32);
        debug_assert!(dep.is_none(), "C0 generators are independent");
    }
    let dep = solver.insert(&ones, n as u32);
    debug_assert!(dep.is_none(), "all-ones is independent of the trace rows");
    let mut kernel: Vec<u64> = Vec::new();
    for (j, row) in gf.iter().enumerate() {
        if let Some(combo) = solver.insert(row, (n + 1 + j) as u32) {
            kernel.push(combo);
        }
    }
    let gf_part = |combo: u64| -> u32 { (combo >> (n + 1)) as u32 };

    // particular solution per row of G_g
    let particular: Vec<u64> = gg
        .iter()
        .map(|row| solver.express(row).ok_or(Error::NoWitness))
        .collect::<Result<_>>()?;

    // enumerate each coset in lex order of the B1 row it induces
    let cosets: Vec<Vec<(u32, u64)>> = particular
        .iter()
        .map(|&p| {
            let mut items: Vec<(u32, u64)> = (0..1u64 << kernel.len())
                .map(|mask| {
                    let mut combo = p;
                    for (b, k) in kernel.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            combo ^= k;
                        }
                    }
                    (lex_key(gf_part(combo), n), combo)
                })
                .collect();
            items.sort_unstable();
            items
        })
        .collect();

    fn dfs(
        i: usize,
        n: usize,
        cosets: &[Vec<(u32, u64)>],
        chosen: &mut Vec<u64>,
        basis: &mut Vec<u32>,
    ) -> bool {
        if i == n {
            return true;
        }
        for &(_, combo) in &cosets[i] {
            let row = (combo >> (n + 1)) as u32;
            let mut red = row;
            for &b in basis.iter() {
                let lead = b.trailing_zeros();
                if red >> lead & 1 == 1 {
                    red ^= b;
                }
            }
            if red == 0 {
                continue; // dependent on the rows already chosen
            }
            basis.push(red);
            basis.sort_unstable_by_key(|b| b.trailing_zeros());
            chosen.push(combo);
            if dfs(i + 1, n, cosets, chosen, basis) {
                return true;
            }
            chosen.pop();
            let pos = basis.iter().position(|&b| b == red).unwrap();
            basis.remove(pos);
        }
        false
    }

    let mut chosen = Vec::with_capacity(n);
    let mut basis = Vec::new();
    if !dfs(0, n, &cosets, &mut chosen, &mut basis) {
        // cannot happen for equal codes; kept as a hard error for safety
        return Err(Error::NoWitness);
    }

    let witness = AffineWitness {
        field,
        b1: chosen.iter().map(|&c| gf_part(c)).collect(),
        b: chosen
            .iter()
            .map(|&c| (c & ((1 << n) - 1)) as u32)
            .collect(),
        t: chosen
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &c)| acc | (((c >> n) & 1) as u32) << i),
    };
    assert!(witness.verify(c, d), "solved witness must substitute back");
    Ok(witness)
}
