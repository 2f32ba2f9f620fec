//! Named group constructors, group expressions and the complete catalog of
//! groups of order at most 12.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, MAX_ORDER};

/// A named group family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupName {
    /// Cyclic group of order k.
    Z(u32),
    /// Dihedral group of order 2n.
    D(u32),
    Q8,
    Dic12,
    /// Symmetric group on n <= 4 points.
    S(u32),
    A4,
    /// `(Z3 × Z3) ⋊ Z2` with the inverting action.
    E9,
    SL2_3,
    /// `Z_p ⋊ Z_q` with `y x y⁻¹ = x^r`.
    SD(u32, u32, u32),
}

/// Abstract syntax of a group expression such as `Q8xZ2^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Named(GroupName),
    Product(Box<GroupExpr>, Box<GroupExpr>),
    Power(Box<GroupExpr>, u32),
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::Z(k) => write!(f, "Z{k}"),
            GroupName::D(n) => write!(f, "D{n}"),
            GroupName::Q8 => write!(f, "Q8"),
            GroupName::Dic12 => write!(f, "Dic12"),
            GroupName::S(n) => write!(f, "S{n}"),
            GroupName::A4 => write!(f, "A4"),
            GroupName::E9 => write!(f, "E9"),
            GroupName::SL2_3 => write!(f, "SL2_3"),
            GroupName::SD(p, q, r) => write!(f, "SD({p},{q},{r})"),
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Named(n) => write!(f, "{n}"),
            GroupExpr::Product(a, b) => write!(f, "{a}x{b}"),
            GroupExpr::Power(a, k) => write!(f, "{a}^{k}"),
        }
    }
}

impl std::str::FromStr for GroupExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at position {} in `{}`", self.pos, self.src)))
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<u32> {
        let digits: &str = {
            let r = self.rest();
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            &r[..end]
        };
        if digits.is_empty() {
            return self.err("expected integer");
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| Error::Parse(format!("integer `{digits}` too large")))
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(&format!("expected `{token}`"))
        }
    }

    fn name(&mut self) -> Result<GroupName> {
        // Longer literals first so that `S` does not shadow `SL2_3`/`SD(`.
        if self.eat("SL2_3") {
            return Ok(GroupName::SL2_3);
        }
        if self.eat("SD(") {
            let p = self.int()?;
            self.expect(",")?;
            let q = self.int()?;
            self.expect(",")?;
            let r = self.int()?;
            self.expect(")")?;
            return Ok(GroupName::SD(p, q, r));
        }
        if self.eat("Semidirect(") {
            self.expect("Z")?;
            let p = self.int()?;
            self.expect(",")?;
            self.expect("Z")?;
            let q = self.int()?;
            self.expect(",")?;
            let r = self.int()?;
            self.expect(")")?;
            return Ok(GroupName::SD(p, q, r));
        }
        for (lit, name) in [
            ("Dic12", GroupName::Dic12),
            ("Q8", GroupName::Q8),
            ("A4", GroupName::A4),
            ("E9", GroupName::E9),
        ] {
            if self.eat(lit) {
                return Ok(name);
            }
        }
        if self.eat("Z") {
            let k = self.int()?;
            if k == 0 {
                return self.err("Z0 is not a group");
            }
            return Ok(GroupName::Z(k));
        }
        if self.eat("D") {
            let n = self.int()?;
            if n == 0 {
                return self.err("D0 is not a group");
            }
            return Ok(GroupName::D(n));
        }
        if self.eat("S") {
            let n = self.int()?;
            if !(1..=4).contains(&n) {
                return self.err("symmetric groups are supported for 1..=4 points");
            }
            return Ok(GroupName::S(n));
        }
        self.err("unknown group name")
    }

    fn term(&mut self) -> Result<GroupExpr> {
        let base = GroupExpr::Named(self.name()?);
        if self.eat("^") {
            let k = self.int()?;
            if k == 0 {
                return self.err("exponent must be positive");
            }
            Ok(GroupExpr::Power(Box::new(base), k))
        } else {
            Ok(base)
        }
    }
}

/// Parses `expr := term ('x' term)* ; term := name ('^' int)?`.
pub fn parse(src: &str) -> Result<GroupExpr> {
    let src = src.trim();
    let mut p = Parser { src, pos: 0 };
    let mut expr = p.term()?;
    while p.eat("x") {
        let rhs = p.term()?;
        expr = GroupExpr::Product(Box::new(expr), Box::new(rhs));
    }
    if !p.rest().is_empty() {
        return p.err("trailing input");
    }
    Ok(expr)
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn name_order(name: &GroupName) -> u64 {
    match *name {
        GroupName::Z(k) => k as u64,
        GroupName::D(n) => 2 * n as u64,
        GroupName::Q8 => 8,
        GroupName::Dic12 | GroupName::A4 => 12,
        GroupName::S(n) => (1..=n as u64).product(),
        GroupName::E9 => 18,
        GroupName::SL2_3 => 24,
        GroupName::SD(p, q, _) => p as u64 * q as u64,
    }
}

impl GroupExpr {
    /// Order of the group the expression denotes, without building it.
    pub fn order(&self) -> u64 {
        match self {
            GroupExpr::Named(n) => name_order(n),
            GroupExpr::Product(a, b) => a.order().saturating_mul(b.order()),
            GroupExpr::Power(a, k) => a.order().saturating_pow(*k),
        }
    }
}

/// Builds the group denoted by `expr`.
pub fn build(expr: &GroupExpr) -> Result<FiniteGroup> {
    let order = expr.order();
    if order > MAX_ORDER as u64 {
        return Err(Error::OrderTooLarge(order));
    }
    match expr {
        GroupExpr::Named(name) => build_named(name),
        GroupExpr::Product(a, b) => build(a)?.direct_product(&build(b)?),
        GroupExpr::Power(base, k) => match **base {
            GroupExpr::Named(GroupName::Z(p)) if is_prime(p) => {
                Ok(elementary_abelian(p as usize, *k as usize))
            }
            _ => {
                let g = build(base)?;
                (1..*k).try_fold(g.clone(), |acc, _| acc.direct_product(&g))
            }
        },
    }
}

/// Parses and builds a group expression.
pub fn group(src: &str) -> Result<FiniteGroup> {
    build(&parse(src)?)
}

fn build_named(name: &GroupName) -> Result<FiniteGroup> {
    Ok(match *name {
        GroupName::Z(k) => cyclic(k as usize),
        GroupName::D(n) => dihedral(n as usize),
        GroupName::Q8 => quaternion(),
        GroupName::Dic12 => dicyclic12(),
        GroupName::S(n) => symmetric(n as usize),
        GroupName::A4 => alternating4(),
        GroupName::E9 => e9(),
        GroupName::SL2_3 => sl2_3(),
        GroupName::SD(p, q, r) => semidirect_cyclic(p as usize, q as usize, r as usize)?,
    })
}

/// `x^k` as a display word: `""` for k = 0, `x` for 1, `x3` otherwise.
fn power_word(gen: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => gen.to_string(),
        _ => format!("{gen}{k}"),
    }
}

fn word_or_one(w: String) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w
    }
}

fn from_fn(n: usize, names: Vec<String>, op: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let table = (0..n).map(|a| (0..n).map(|b| op(a, b)).collect()).collect();
    FiniteGroup::from_table(table, names).expect("catalog constructor produced an invalid table")
}

/// Cyclic group of order `n`: element `k` is `x^k`.
pub fn cyclic(n: usize) -> FiniteGroup {
    let names = (0..n).map(|k| word_or_one(power_word("x", k))).collect();
    from_fn(n, names, |a, b| (a + b) % n)
}

/// Elementary abelian group `Z_p^k`; index `Σ c_i p^i` has name `e1^c1 e2^c2 ...`.
pub fn elementary_abelian(p: usize, k: usize) -> FiniteGroup {
    let n = p.pow(k as u32);
    let digits = |mut x: usize| -> Vec<usize> {
        (0..k)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    };
    let names = (0..n)
        .map(|x| {
            let w: String = digits(x)
                .iter()
                .enumerate()
                .map(|(i, &c)| match c {
                    0 => String::new(),
                    1 => format!("e{}", i + 1),
                    _ => format!("e{}^{c}", i + 1),
                })
                .collect();
            word_or_one(w)
        })
        .collect();
    from_fn(n, names, |a, b| {
        let (da, db) = (digits(a), digits(b));
        (0..k).rev().fold(0, |acc, i| acc * p + (da[i] + db[i]) % p)
    })
}

/// Dihedral group `<x, y | x² = yⁿ = 1, x y x = y⁻¹>` of order `2n`, with `x`
/// a reflection and `y` a rotation. Index `b·n + a` is `x^b y^a`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let names = (0..2 * n)
        .map(|i| word_or_one(power_word("x", i / n) + &power_word("y", i % n)))
        .collect();
    from_fn(2 * n, names, |u, v| {
        let (b, a) = (u / n, u % n);
        let (c, d) = (v / n, v % n);
        // x^b y^a x^c y^d = x^(b+c) y^((-1)^c a + d)
        let a2 = if c == 1 { (n - a) % n } else { a };
        ((b + c) % 2) * n + (a2 + d) % n
    })
}

/// Quaternion group with elements `1, -1, i, -i, j, -j, k, -k` in that index order.
pub fn quaternion() -> FiniteGroup {
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec();
    // unit products: (unit_a, unit_b) -> (sign, unit), units 0=1, 1=i, 2=j, 3=k
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    from_fn(8, names, |a, b| {
        let (neg, u) = UNIT[a / 2][b / 2];
        let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
        2 * u + sign as usize
    })
}

/// `Z_p ⋊ Z_q = <x, y | x^p = y^q = 1, y x y⁻¹ = x^r>`; index `b·p + a` is `x^a y^b`.
pub fn semidirect_cyclic(p: usize, q: usize, r: usize) -> Result<FiniteGroup> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidSemidirect("factor orders must be positive".into()));
    }
    if p * q > MAX_ORDER {
        return Err(Error::OrderTooLarge((p * q) as u64));
    }
    let r = r % p;
    let mut rq = 1 % p;
    for _ in 0..q {
        rq = rq * r % p;
    }
    if p > 1 && (num_integer::gcd(r, p) != 1 || rq != 1) {
        return Err(Error::InvalidSemidirect(format!("{r}^{q} is not 1 mod {p}")));
    }
    let n = cyclic(p);
    let h = cyclic(q);
    let action = if q > 1 { vec![(1, (0..p).map(|a| a * r % p.max(1)).collect())] } else { vec![] };
    let g = FiniteGroup::semidirect_product(&n, &h, &action)?;
    let names = (0..p * q)
        .map(|i| word_or_one(power_word("x", i % p) + &power_word("y", i / p)))
        .collect();
    g.renamed(names)
}

/// Dicyclic group `<x, y | x³ = y⁴ = 1, y x y⁻¹ = x⁻¹>`.
pub fn dicyclic12() -> FiniteGroup {
    semidirect_cyclic(3, 4, 2).expect("valid parameters")
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p ∘ q)(i) = p(q(i)): apply q first
    q.iter().map(|&i| p[i]).collect()
}

fn cycle_name(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    word_or_one(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    inversions % 2 == 0
}

fn permutation_group(perms: Vec<Vec<usize>>) -> FiniteGroup {
    let n = perms.len();
    let names = perms.iter().map(|p| cycle_name(p)).collect();
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
    let table = (0..n).map(|a| (0..n).map(|b| index(&compose(&perms[a], &perms[b]))).collect()).collect();
    FiniteGroup::from_table(table, names).expect("permutation group")
}

/// Symmetric group on `n <= 4` points in lexicographic order (identity first),
/// composing right to left. Elements are named in cycle notation.
pub fn symmetric(n: usize) -> FiniteGroup {
    permutation_group(permutations(n))
}

/// Alternating group on 4 points.
pub fn alternating4() -> FiniteGroup {
    permutation_group(permutations(4).into_iter().filter(|p| is_even(p)).collect())
}

/// The permutation of `{0..n}` behind each element of a catalog permutation group.
pub fn permutation_of(g: &FiniteGroup, a: usize, points: usize) -> Option<Vec<usize>> {
    permutations(points).into_iter().find(|p| cycle_name(p) == g.name(a))
}

/// `(Z3 × Z3) ⋊ Z2` where the involution inverts every element.
/// Index `c·9 + b·3 + a` is `x^a y^b z^c`.
pub fn e9() -> FiniteGroup {
    let n = elementary_abelian(3, 2);
    let h = cyclic(2);
    let invert = (0..9).map(|a| n.inv(a)).collect();
    let g = FiniteGroup::semidirect_product(&n, &h, &[(1, invert)]).expect("inverting action");
    let names = (0..18)
        .map(|i| {
            word_or_one(power_word("x", i % 3) + &power_word("y", (i / 3) % 3) + &power_word("z", i / 9))
        })
        .collect();
    g.renamed(names).expect("distinct names")
}

/// `SL(2, 3)`: 2×2 matrices over the field with 3 elements and determinant 1.
pub fn sl2_3() -> FiniteGroup {
    let mut mats: Vec<[usize; 4]> = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    if (a * d + 3 * 3 - b * c) % 3 == 1 {
                        mats.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let id = [1, 0, 0, 1];
    mats.sort_by_key(|m| (*m != id, *m));
    let mul = |m: &[usize; 4], n: &[usize; 4]| {
        [
            (m[0] * n[0] + m[1] * n[2]) % 3,
            (m[0] * n[1] + m[1] * n[3]) % 3,
            (m[2] * n[0] + m[3] * n[2]) % 3,
            (m[2] * n[1] + m[3] * n[3]) % 3,
        ]
    };
    let names = mats
        .iter()
        .map(|m| if *m == id { "1".to_string() } else { format!("[{},{};{},{}]", m[0], m[1], m[2], m[3]) })
        .collect();
    let index = |m: [usize; 4]| mats.iter().position(|x| *x == m).expect("closed");
    let n = mats.len();
    let table = (0..n).map(|a| (0..n).map(|b| index(mul(&mats[a], &mats[b]))).collect()).collect();
    FiniteGroup::from_table(table, names).expect("SL(2,3)")
}

/// Expression strings of the complete list of groups of order `n`, up to isomorphism.
pub fn catalog_names(n: usize) -> Result<&'static [&'static str]> {
    Ok(match n {
        1 => &["Z1"],
        2 => &["Z2"],
        3 => &["Z3"],
        4 => &["Z4", "Z2^2"],
        5 => &["Z5"],
        6 => &["Z6", "S3"],
        7 => &["Z7"],
        8 => &["Z8", "Z4xZ2", "Z2^3", "D4", "Q8"],
        9 => &["Z9", "Z3^2"],
        10 => &["Z10", "D5"],
        11 => &["Z11"],
        12 => &["Z12", "Z2^2xZ3", "A4", "D6", "Dic12"],
        _ => return Err(Error::CatalogRange(n)),
    })
}

/// All groups of order `n <= 12`, up to isomorphism, as `(expression, group)` pairs.
pub fn all_groups_of_order(n: usize) -> Result<Vec<(String, FiniteGroup)>> {
    catalog_names(n)?.iter().map(|s| Ok((s.to_string(), group(s)?))).collect()
}

/// Every catalog group of order 1..=12 (24 groups).
pub fn complete_catalog() -> Vec<(String, FiniteGroup)> {
    (1..=12).flat_map(|n| all_groups_of_order(n).expect("in range")).collect()
}
