//! Functions f: K -> K as value tables, with the differential-uniformity /
//! APN tests, algebraic degree via the ANF Möbius transform, and the built-in
//! function zoo (Gold monomials, the trinomial family, the three sporadic
//! counterexample polynomials).

use crate::error::{Error, Result};
use crate::gf2n::{FieldElement, FieldSpec};
use rand::Rng;

/// Sparse univariate polynomial over K. Exponents are kept strictly
/// increasing and coefficients nonzero; constructing normalizes both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpec {
    field: FieldSpec,
    terms: Vec<(FieldElement, u32)>,
}

/// Reduces an exponent to the canonical representative of x^e as a function:
/// 0 stays 0, positive e maps into 1..=2^n-1 (x^{2^n-1} is NOT x^0).
fn reduce_exponent(e: u64, n: u32) -> u32 {
    if e == 0 {
        0
    } else {
        let m = (1u64 << n) - 1;
        ((e - 1) % m + 1) as u32
    }
}

impl PolySpec {
    pub fn new(
        field: FieldSpec,
        terms: impl IntoIterator<Item = (FieldElement, u64)>,
    ) -> Result<Self> {
        let mut acc: Vec<(u32, FieldElement)> = Vec::new();
        for (c, e) in terms {
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
            let e = reduce_exponent(e, field.n());
            match acc.iter_mut().find(|(ae, _)| *ae == e) {
                Some((_, ac)) => *ac += c,
                None => acc.push((e, c)),
            }
        }
        acc.retain(|(_, c)| !c.is_zero());
        acc.sort_by_key(|(e, _)| *e);
        Ok(PolySpec {
            field,
            terms: acc.into_iter().map(|(e, c)| (c, e)).collect(),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> &[(FieldElement, u32)] {
        &self.terms
    }

    /// Evaluates term-by-term into a full value table.
    pub fn evaluate(&self) -> FunctionTable {
        let f = self.field;
        let values = f
            .elements()
            .map(|x| {
                let mut acc = f.zero();
                for &(c, e) in &self.terms {
                    acc += c * x.pow(e as i64).unwrap();
                }
                acc.bits()
            })
            .collect();
        FunctionTable { field: f, values }
    }

    /// Renders the one-directive-per-line text form.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("field {}\n", self.field);
        for &(c, e) in &self.terms {
            out.push_str(&format!("term 0x{:x} {}\n", c.bits(), e));
        }
        out
    }

    /// Parses the text form: a `field` line then `term <coeff-hex> <exp>`
    /// lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut field: Option<FieldSpec> = None;
        let mut terms: Vec<(FieldElement, u64)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("field") => {
                    let spec = words.next().ok_or_else(|| {
                        Error::Parse(format!("line {}: missing field designation", lineno + 1))
                    })?;
                    field = Some(FieldSpec::parse(spec)?);
                }
                Some("term") => {
                    let f = field.ok_or_else(|| {
                        Error::Parse(format!("line {}: term before field line", lineno + 1))
                    })?;
                    let c_str = words.next().ok_or_else(|| {
                        Error::Parse(format!("line {}: missing coefficient", lineno + 1))
                    })?;
                    let e_str = words.next().ok_or_else(|| {
                        Error::Parse(format!("line {}: missing exponent", lineno + 1))
                    })?;
                    let c_hex = c_str
                        .strip_prefix("0x")
                        .or_else(|| c_str.strip_prefix("0X"))
                        .ok_or_else(|| {
                            Error::Parse(format!("line {}: coefficient must be 0x-hex", lineno + 1))
                        })?;
                    let c = u32::from_str_radix(c_hex, 16).map_err(|_| {
                        Error::Parse(format!("line {}: bad coefficient", lineno + 1))
                    })?;
                    if c as usize >= f.size() {
                        return Err(Error::Parse(format!(
                            "line {}: coefficient 0x{:x} out of range",
                            lineno + 1,
                            c
                        )));
                    }
                    let e: u64 = e_str
                        .parse()
                        .map_err(|_| Error::Parse(format!("line {}: bad exponent", lineno + 1)))?;
                    terms.push((f.elem(c), e));
                }
                Some(other) => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown directive {other:?}",
                        lineno + 1
                    )))
                }
                None => unreachable!(),
            }
        }
        let field = field.ok_or_else(|| Error::Parse("no field line".into()))?;
        PolySpec::new(field, terms)
    }
}

/// A function K -> K evaluated on all of K, indexed by the canonical
/// integer order of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    field: FieldSpec,
    values: Vec<u32>,
}

impl FunctionTable {
    pub fn from_fn(field: FieldSpec, f: impl Fn(FieldElement) -> FieldElement) -> Self {
        let values = field.elements().map(|x| f(x).bits()).collect();
        FunctionTable { field, values }
    }

    pub fn from_values(field: FieldSpec, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != field.size() {
            return Err(Error::BadParams(format!(
                "value table has {} entries, field needs {}",
                values.len(),
                field.size()
            )));
        }
        if values.iter().any(|v| v.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(FunctionTable {
            field,
            values: values.into_iter().map(|v| v.bits()).collect(),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn value(&self, x: u32) -> FieldElement {
        self.field.elem(self.values[x as usize])
    }

    pub fn raw(&self) -> &[u32] {
        &self.values
    }

    /// Max over a != 0, b of #{x : f(x+a) + f(x) = b}. Counts use a flat
    /// array re-zeroed lazily through a generation stamp; the a-loop is
    /// partitioned over the requested number of threads (a max-reduction, so
    /// the result is partition-independent).
    pub fn differential_uniformity_threads(&self, threads: usize) -> usize {
        let size = self.field.size();
        let threads = threads.clamp(1, size.max(1));
        let worker = |arange: std::ops::Range<usize>| -> u32 {
            let mut count = vec![0u32; size];
            let mut stamp = vec![0u32; size];
            let mut generation = 0u32;
            let mut best = 0u32;
            for a in arange {
                generation += 1;
                for x in 0..size {
                    let b = (self.values[x ^ a] ^ self.values[x]) as usize;
                    if stamp[b] != generation {
                        stamp[b] = generation;
                        count[b] = 0;
                    }
                    count[b] += 1;
                    if count[b] > best {
                        best = count[b];
                    }
                }
            }
            best
        };
        if threads == 1 {
            return worker(1..size) as usize;
        }
        let chunk = (size - 1).div_ceil(threads);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for t in 0..threads {
                let lo = 1 + t * chunk;
                let hi = (lo + chunk).min(size);
                if lo >= hi {
                    break;
                }
                handles.push(scope.spawn(move || worker(lo..hi)));
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .max()
                .unwrap_or(0) as usize
        })
    }

    pub fn differential_uniformity(&self) -> usize {
        self.differential_uniformity_threads(1)
    }

    pub fn is_apn(&self) -> bool {
        self.differential_uniformity() == 2
    }

    /// Max degree over the n coordinate Boolean functions, each read off its
    /// algebraic normal form (Möbius transform over the n-cube).
    pub fn algebraic_degree(&self) -> u32 {
        let n = self.field.n();
        let size = self.field.size();
        let mut best = 0u32;
        for bit in 0..n {
            let mut anf: Vec<u8> = (0..size)
                .map(|x| (self.values[x] >> bit) as u8 & 1)
                .collect();
            for i in 0..n {
                let step = 1usize << i;
                for x in 0..size {
                    if x & step != 0 {
                        anf[x] ^= anf[x ^ step];
                    }
                }
            }
            for (x, &coef) in anf.iter().enumerate() {
                if coef == 1 {
                    best = best.max(x.count_ones());
                }
            }
        }
        best
    }

    /// The table x -> f(x+a) + f(x) + f(a).
    pub fn derivative_map(&self, a: FieldElement) -> Result<FunctionTable> {
        if a.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if a.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let ab = a.bits() as usize;
        let values = (0..self.field.size())
            .map(|x| self.values[x ^ ab] ^ self.values[x] ^ self.values[ab])
            .collect();
        Ok(FunctionTable {
            field: self.field,
            values,
        })
    }

    /// True when every nonzero-direction derivative is GF(2)-additive. For
    /// functions with f(0) = 0 this matches algebraic degree <= 2.
    pub fn derivatives_additive(&self) -> bool {
        let size = self.field.size();
        for a in 1..size {
            let d = self
                .derivative_map(self.field.elem(a as u32))
                .expect("a is nonzero");
            for x in 0..size {
                for y in 0..size {
                    if d.values[x ^ y] != d.values[x] ^ d.values[y] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The unique polynomial of degree < 2^n interpolating the table.
    pub fn to_poly(&self) -> PolySpec {
        let f = self.field;
        let q1 = f.group_order(); // 2^n - 1
        let mut terms: Vec<(FieldElement, u64)> = Vec::new();
        let c0 = self.value(0);
        terms.push((c0, 0));
        for e in 1..q1 {
            let mut c = f.zero();
            for x in f.elements().skip(1) {
                c += self.value(x.bits()) * x.pow(-(e as i64)).unwrap();
            }
            terms.push((c, e));
        }
        let mut top = c0;
        for x in f.elements().skip(1) {
            top += self.value(x.bits());
        }
        terms.push((top, q1));
        PolySpec::new(f, terms).expect("coefficients share the field")
    }
}

/// The built-in functions. Optional family parameters fall back to the
/// documented defaults (smallest primitive b, smallest c outside L).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Gold {
        r: u32,
    },
    Family {
        k: u32,
        s: u32,
        b: Option<u32>,
        c: Option<u32>,
    },
    DillonH1,
    DillonH2,
    DillonH3,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Resolves and validates family parameters against a field of degree 2k.
pub fn family_params(
    field: FieldSpec,
    k: u32,
    s: u32,
    b: Option<u32>,
    c: Option<u32>,
) -> Result<(FieldElement, FieldElement)> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::BadParams(format!("k = {k} must be odd and >= 3")));
    }
    if s.is_multiple_of(2) {
        return Err(Error::BadParams(format!("s = {s} must be odd")));
    }
    if gcd(k as u64, s as u64) != 1 {
        return Err(Error::BadParams(format!(
            "gcd(k, s) = {} != 1",
            gcd(k as u64, s as u64)
        )));
    }
    if field.n() != 2 * k {
        return Err(Error::BadParams(format!(
            "field degree {} does not match 2k = {}",
            field.n(),
            2 * k
        )));
    }
    let sub = field.subfield()?;
    let b = match b {
        Some(bits) => {
            if bits as usize >= field.size() {
                return Err(Error::BadParams(format!("b = 0x{bits:x} out of range")));
            }
            let b = field.elem(bits);
            if !b.is_primitive() {
                return Err(Error::BadParams(format!("b = 0x{bits:x} is not primitive")));
            }
            b
        }
        None => field.first_primitive(),
    };
    let c = match c {
        Some(bits) => {
            if bits as usize >= field.size() {
                return Err(Error::BadParams(format!("c = 0x{bits:x} out of range")));
            }
            let c = field.elem(bits);
            if c.in_subfield(sub)? {
                return Err(Error::BadParams(format!(
                    "c = 0x{bits:x} lies in subfield L"
                )));
            }
            c
        }
        None => field
            .elements()
            .find(|e| !e.in_subfield(sub).unwrap())
            .expect("K strictly contains L"),
    };
    Ok((b, c))
}

fn family_poly(
    field: FieldSpec,
    k: u32,
    s: u32,
    b: FieldElement,
    c: FieldElement,
) -> Result<PolySpec> {
    let e1 = (1u64 << s) + 1;
    let e2 = e1 << k;
    let e3 = (1u64 << k) + 1;
    let bk = b.frob(k as i64);
    PolySpec::new(field, [(b, e1), (bk, e2), (c, e3)])
}

const H1_TERMS: [(u32, u64); 8] = [
    (0, 3),
    (0, 5),
    (62, 9),
    (3, 10),
    (0, 18),
    (3, 20),
    (3, 34),
    (0, 40),
];
const H2_TERMS: [(u32, u64); 6] = [(0, 3), (11, 5), (13, 9), (0, 17), (11, 33), (0, 48)];
const H3_TERMS: [(u32, u64); 5] = [(0, 3), (0, 17), (16, 18), (16, 33), (15, 48)];

/// Builds a sporadic counterexample polynomial, choosing the primitive
/// element u by the documented search rule: try primitive elements in
/// increasing integer order and keep the first that makes the function APN.
/// Returns the polynomial together with the chosen u.
pub fn dillon_representative(
    field: FieldSpec,
    which: &Builtin,
) -> Result<(PolySpec, FieldElement)> {
    let (name, need_n, template): (&'static str, u32, &[(u32, u64)]) = match which {
        Builtin::DillonH1 => ("dillon_h1", 6, &H1_TERMS),
        Builtin::DillonH2 => ("dillon_h2", 6, &H2_TERMS),
        Builtin::DillonH3 => ("dillon_h3", 8, &H3_TERMS),
        _ => return Err(Error::BadParams("not a sporadic builtin".into())),
    };
    if field.n() != need_n {
        return Err(Error::BadParams(format!(
            "{name} requires a degree-{need_n} field"
        )));
    }
    for u in field.elements().filter(|e| e.is_primitive()) {
        let terms = template
            .iter()
            .map(|&(up, e)| (u.pow(up as i64).unwrap(), e));
        let p = PolySpec::new(field, terms)?;
        if p.evaluate().is_apn() {
            return Ok((p, u));
        }
    }
    Err(Error::NoApnRepresentative(name))
}

/// Returns the requested named function as an explicit polynomial.
pub fn builtin_function(field: FieldSpec, which: &Builtin) -> Result<PolySpec> {
    match which {
        Builtin::Gold { r } => {
            if *r == 0 || gcd(*r as u64, field.n() as u64) != 1 {
                return Err(Error::BadParams(format!(
                    "gcd(r, n) != 1 for r = {r}, n = {}",
                    field.n()
                )));
            }
            PolySpec::new(field, [(field.one(), (1u64 << r) + 1)])
        }
        Builtin::Family { k, s, b, c } => {
            let (b, c) = family_params(field, *k, *s, *b, *c)?;
            family_poly(field, *k, *s, b, c)
        }
        Builtin::DillonH1 | Builtin::DillonH2 | Builtin::DillonH3 => {
            dillon_representative(field, which).map(|(p, _)| p)
        }
    }
}

/// A random polynomial of algebraic degree exactly 2 with f(0) = 0:
/// quadratic monomials x^{2^i + 2^j} (i < j) plus linearized terms, with
/// coefficients drawn from the given generator.
pub fn random_quadratic(field: FieldSpec, rng: &mut impl Rng) -> PolySpec {
    loop {
        let mut terms: Vec<(FieldElement, u64)> = Vec::new();
        let n = field.n();
        let mask = (field.size() - 1) as u32;
        for i in 0..n {
            for j in (i + 1)..n {
                let c = rng.gen::<u32>() & mask;
                if c != 0 {
                    terms.push((field.elem(c), (1u64 << i) + (1u64 << j)));
                }
            }
        }
        for i in 0..n {
            let c = rng.gen::<u32>() & mask;
            if c != 0 {
                terms.push((field.elem(c), 1u64 << i));
            }
        }
        let p = PolySpec::new(field, terms).expect("same field");
        if p.evaluate().algebraic_degree() == 2 {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2n::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gold(n: u32, r: u32) -> FunctionTable {
        let f = make_field(n, None).unwrap();
        builtin_function(f, &Builtin::Gold { r })
            .unwrap()
            .evaluate()
    }

    #[test]
    fn evaluate_identity_and_cube_over_gf4() {
        let f = make_field(2, None).unwrap();
        let id = PolySpec::new(f, [(f.one(), 1)]).unwrap().evaluate();
        assert_eq!(id.raw(), &[0, 1, 2, 3]);
        // x^3 is the norm onto GF(2): 1 on every nonzero element
        let cube = PolySpec::new(f, [(f.one(), 3)]).unwrap().evaluate();
        assert_eq!(cube.raw(), &[0, 1, 1, 1]);
    }

    #[test]
    fn exponent_reduction_folds_high_powers() {
        let f = make_field(4, None).unwrap();
        // x^16 = x as a function; x^18 = x^3
        let p = PolySpec::new(f, [(f.one(), 18)]).unwrap();
        assert_eq!(p.terms(), &[(f.one(), 3)]);
        let q = PolySpec::new(f, [(f.one(), 15)]).unwrap();
        assert_eq!(q.terms(), &[(f.one(), 15)]);
    }

    #[test]
    fn duplicate_terms_cancel() {
        let f = make_field(4, None).unwrap();
        let p = PolySpec::new(f, [(f.u(), 3), (f.u(), 3)]).unwrap();
        assert!(p.terms().is_empty());
        assert!(p.evaluate().raw().iter().all(|&v| v == 0));
    }

    #[test]
    fn differential_uniformity_landmarks() {
        assert_eq!(gold(4, 1).differential_uniformity(), 2);
        assert!(gold(5, 1).is_apn());
        assert!(gold(4, 1).is_apn());
        let f = make_field(4, None).unwrap();
        let x4 = PolySpec::new(f, [(f.one(), 4)]).unwrap().evaluate();
        assert_eq!(x4.differential_uniformity(), 16);
        let x5 = PolySpec::new(f, [(f.one(), 5)]).unwrap().evaluate();
        assert_eq!(x5.differential_uniformity(), 4);
        assert!(!x5.is_apn());
    }

    #[test]
    fn uniformity_independent_of_thread_count() {
        let t = gold(6, 1);
        let base = t.differential_uniformity_threads(1);
        for threads in [2, 3, 8] {
            assert_eq!(t.differential_uniformity_threads(threads), base);
        }
    }

    #[test]
    fn solution_counts_per_direction_sum_to_field_size() {
        let t = gold(5, 2);
        let size = t.field().size();
        for a in 1..size {
            let mut counts = vec![0u32; size];
            for x in 0..size {
                counts[(t.raw()[x ^ a] ^ t.raw()[x]) as usize] += 1;
            }
            assert_eq!(counts.iter().sum::<u32>() as usize, size);
            assert!(counts.iter().all(|&c| c % 2 == 0));
        }
    }

    #[test]
    fn uniformity_invariant_under_affine_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [4u32, 5] {
            let f = make_field(n, None).unwrap();
            let size = f.size();
            let t = gold(n, 1);
            // random invertible linear map plus shift
            let perm = loop {
                let rows: Vec<u32> = (0..n)
                    .map(|_| rng.gen::<u32>() & (size as u32 - 1))
                    .collect();
                let mut m = rows.clone();
                let mut rank = 0;
                for col in 0..n {
                    if let Some(r) = (rank..n).find(|&r| m[r as usize] >> col & 1 == 1) {
                        m.swap(rank as usize, r as usize);
                        for rr in 0..n {
                            if rr != rank && m[rr as usize] >> col & 1 == 1 {
                                m[rr as usize] ^= m[rank as usize];
                            }
                        }
                        rank += 1;
                    }
                }
                if rank == n {
                    break rows;
                }
            };
            let shift = rng.gen::<u32>() & (size as u32 - 1);
            let apply = |x: usize| -> usize {
                let mut y = shift;
                for (i, row) in perm.iter().enumerate() {
                    if x >> i & 1 == 1 {
                        y ^= row;
                    }
                }
                y as usize
            };
            let inner = FunctionTable::from_fn(f, |x| t.value(apply(x.bits() as usize) as u32));
            let outer = FunctionTable::from_fn(f, |x| {
                f.elem(apply(t.value(x.bits()).bits() as usize) as u32)
            });
            assert_eq!(inner.differential_uniformity(), t.differential_uniformity());
            assert_eq!(outer.differential_uniformity(), t.differential_uniformity());
        }
    }

    #[test]
    fn algebraic_degree_landmarks() {
        assert_eq!(gold(4, 1).algebraic_degree(), 2);
        assert_eq!(gold(6, 5).algebraic_degree(), 2);
        let f = make_field(4, None).unwrap();
        let x4 = PolySpec::new(f, [(f.one(), 4)]).unwrap().evaluate();
        assert_eq!(x4.algebraic_degree(), 1);
        let x7 = PolySpec::new(f, [(f.one(), 7)]).unwrap().evaluate();
        assert_eq!(x7.algebraic_degree(), 3);
        let c = PolySpec::new(f, [(f.u(), 0)]).unwrap().evaluate();
        assert_eq!(c.algebraic_degree(), 0);
        let fam = make_field(6, None).unwrap();
        let fam = builtin_function(
            fam,
            &Builtin::Family {
                k: 3,
                s: 1,
                b: None,
                c: None,
            },
        )
        .unwrap()
        .evaluate();
        assert_eq!(fam.algebraic_degree(), 2);
    }

    #[test]
    fn derivative_of_cube_is_the_textbook_linear_map() {
        let f = make_field(5, None).unwrap();
        let t = gold(5, 1);
        for a in f.elements().skip(1) {
            let d = t.derivative_map(a).unwrap();
            let expect = FunctionTable::from_fn(f, |x| a * x.square() + a.square() * x);
            assert_eq!(d, expect);
            assert!(d.value(0).is_zero());
        }
        assert!(matches!(
            t.derivative_map(f.zero()),
            Err(Error::ZeroDirection)
        ));
    }

    #[test]
    fn additivity_matches_degree_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in [4u32, 5, 6] {
            let f = make_field(n, None).unwrap();
            let quad = random_quadratic(f, &mut rng).evaluate();
            assert!(quad.derivatives_additive());
            assert_eq!(quad.algebraic_degree(), 2);
            let cubic = PolySpec::new(f, [(f.one(), 7)]).unwrap().evaluate();
            assert_eq!(cubic.algebraic_degree(), 3);
            assert!(!cubic.derivatives_additive());
        }
    }

    #[test]
    fn gold_builtin_validates_r() {
        let f = make_field(4, None).unwrap();
        let p = builtin_function(f, &Builtin::Gold { r: 1 }).unwrap();
        assert_eq!(p.terms(), &[(f.one(), 3)]);
        assert!(matches!(
            builtin_function(f, &Builtin::Gold { r: 2 }),
            Err(Error::BadParams(_))
        ));
        // r beyond n is fine as long as it is coprime: x^{2^7+1} = x^3 at n=6
        let f6 = make_field(6, None).unwrap();
        let p7 = builtin_function(f6, &Builtin::Gold { r: 7 }).unwrap();
        assert_eq!(p7.terms(), &[(f6.one(), 3)]);
    }

    #[test]
    fn family_builtin_validates_params() {
        let f = make_field(6, None).unwrap();
        let err = builtin_function(
            f,
            &Builtin::Family {
                k: 3,
                s: 3,
                b: None,
                c: None,
            },
        );
        assert!(matches!(err, Err(Error::BadParams(_))));
        let err = builtin_function(
            f,
            &Builtin::Family {
                k: 3,
                s: 1,
                b: None,
                c: Some(1),
            },
        );
        assert!(matches!(err, Err(Error::BadParams(_))));
        let err = builtin_function(
            f,
            &Builtin::Family {
                k: 3,
                s: 1,
                b: Some(1),
                c: None,
            },
        );
        assert!(matches!(err, Err(Error::BadParams(_))));
        let ok = builtin_function(
            f,
            &Builtin::Family {
                k: 3,
                s: 1,
                b: None,
                c: None,
            },
        )
        .unwrap();
        assert_eq!(ok.terms().len(), 3);
        assert!(ok.evaluate().is_apn());
        // defaults resolve to the smallest primitive b and smallest c outside L
        let (b, c) = family_params(f, 3, 1, None, None).unwrap();
        assert_eq!(b, f.u());
        assert_eq!(c, f.u());
    }

    #[test]
    fn sporadic_builtins_are_apn_with_recorded_u() {
        let f6 = make_field(6, None).unwrap();
        for which in [Builtin::DillonH1, Builtin::DillonH2] {
            let (p, u) = dillon_representative(f6, &which).unwrap();
            assert_eq!(
                u,
                f6.u(),
                "search rule should settle on the first primitive"
            );
            assert!(p.evaluate().is_apn());
        }
        let (h1, _) = dillon_representative(f6, &Builtin::DillonH1).unwrap();
        assert_eq!(h1.terms().len(), 8);
        let f8 = make_field(8, None).unwrap();
        let (h3, u) = dillon_representative(f8, &Builtin::DillonH3).unwrap();
        assert_eq!(u, f8.u());
        assert_eq!(h3.terms().len(), 5);
        assert!(h3.evaluate().is_apn());
        assert!(matches!(
            builtin_function(f6, &Builtin::DillonH3),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn file_format_round_trip() {
        let f = make_field(6, None).unwrap();
        let p = builtin_function(f, &Builtin::DillonH2).unwrap();
        let text = p.to_file_string();
        let q = PolySpec::parse(&text).unwrap();
        assert_eq!(p, q);
        let commented = format!("# counterexample\n{text}");
        assert_eq!(PolySpec::parse(&commented).unwrap(), p);
        assert!(PolySpec::parse("term 0x1 3\n").is_err());
        assert!(PolySpec::parse("field gf2e6\nterm 1 3\n").is_err());
        assert!(PolySpec::parse("field gf2e6\nbogus\n").is_err());
    }

    #[test]
    fn interpolation_inverts_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for n in [4u32, 6] {
            let f = make_field(n, None).unwrap();
            let values: Vec<FieldElement> = (0..f.size())
                .map(|_| f.elem(rng.gen::<u32>() & (f.size() as u32 - 1)))
                .collect();
            let table = FunctionTable::from_values(f, values).unwrap();
            let p = table.to_poly();
            assert_eq!(p.evaluate(), table);
        }
    }

    #[test]
    fn random_quadratics_fix_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = make_field(6, None).unwrap();
        for _ in 0..5 {
            let t = random_quadratic(f, &mut rng).evaluate();
            assert!(t.value(0).is_zero());
            assert_eq!(t.algebraic_degree(), 2);
        }
    }
}
