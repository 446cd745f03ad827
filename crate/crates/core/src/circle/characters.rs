//! Dirichlet characters built from the structure of `(Z/qZ)*`, with Gauss sums.
//!
//! The unit group is a product over `p^k ‖ q` of cyclic groups generated by a
//! primitive root (odd `p`), or of `⟨−1⟩ × ⟨5⟩` for `2^k` with `k ≥ 3`. A character
//! is a vector of exponents, one per cyclic factor.

use num_complex::Complex64;
use serde::Serialize;

use super::sums::e;
use crate::arith::{factorize, gcd, mod_pow};
use crate::{Error, Result};

/// Largest modulus for which tables are built.
pub const MAX_MODULUS: u64 = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct Character {
    pub modulus: u64,
    /// Exponent index per cyclic factor.
    pub index: Vec<u64>,
    /// `χ(n)` for `n = 0..modulus`, zero off the units.
    pub values: Vec<Complex64>,
    pub conductor: u64,
}

impl Character {
    pub fn eval(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    pub fn is_principal(&self) -> bool {
        self.index.iter().all(|&j| j == 0)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn conj(&self) -> Character {
        Character {
            values: self.values.iter().map(|v| v.conj()).collect(),
            index: self.index.clone(),
            ..*self
        }
    }

    /// `τ(χ) = Σ_{b mod q} χ(b) e(b/q)`.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus;
        (0..q)
            .map(|b| self.values[b as usize] * e(b as f64 / q as f64))
            .sum()
    }
}

impl Clone for CharacterTable {
    fn clone(&self) -> Self {
        CharacterTable {
            modulus: self.modulus,
            characters: self.characters.clone(),
            gauss_sums: self.gauss_sums.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CharacterTable {
    pub modulus: u64,
    pub characters: Vec<Character>,
    /// `τ(χ̄)` for each character, in the same order.
    pub gauss_sums: Vec<Complex64>,
}

/// One cyclic factor: a generator modulo `m = p^k` and its order.
struct Cyclic {
    prime_power: u64,
    generator: u64,
    order: u64,
}

fn cyclic_factors(q: u64) -> Vec<Cyclic> {
    let mut out = Vec::new();
    for (p, k) in factorize(q) {
        let m = p.pow(k);
        if p == 2 {
            match k {
                1 => {}
                2 => out.push(Cyclic {
                    prime_power: m,
                    generator: m - 1,
                    order: 2,
                }),
                _ => {
                    out.push(Cyclic {
                        prime_power: m,
                        generator: m - 1,
                        order: 2,
                    });
                    out.push(Cyclic {
                        prime_power: m,
                        generator: 5,
                        order: m / 4,
                    });
                }
            }
        } else {
            let order = m / p * (p - 1);
            let ord_factors: Vec<u64> = factorize(order).into_iter().map(|(r, _)| r).collect();
            let g = (2..m)
                .find(|&g| {
                    gcd(g, m) == 1 && ord_factors.iter().all(|&r| mod_pow(g, order / r, m) != 1)
                })
                .expect("odd prime powers have primitive roots");
            out.push(Cyclic {
                prime_power: m,
                generator: g,
                order,
            });
        }
    }
    out
}

/// Exponent vector of every unit `n mod q` against the cyclic factors.
fn discrete_logs(q: u64, factors: &[Cyclic]) -> Vec<Option<Vec<u64>>> {
    let r = factors.len();
    let mut logs: Vec<Option<Vec<u64>>> = vec![None; q as usize];
    // enumerate all exponent vectors and map each to its residue by CRT-free search:
    // residues mod each prime power are combined through a per-factor table
    let mut tables: Vec<Vec<u64>> = Vec::with_capacity(r);
    for f in factors {
        let mut t = vec![u64::MAX; f.prime_power as usize];
        let mut cur = 1 % f.prime_power;
        for e in 0..f.order {
            t[cur as usize] = e;
            cur = cur * f.generator % f.prime_power;
        }
        tables.push(t);
    }
    for n in 0..q {
        if gcd(n, q) != 1 {
            continue;
        }
        let mut v = vec![0u64; r];
        let mut i = 0;
        while i < r {
            let f = &factors[i];
            let m = f.prime_power;
            let two_gen = i + 1 < r && factors[i + 1].prime_power == m;
            if two_gen {
                // 2^k, k >= 3: n ≡ (−1)^a 5^b
                let res = n % m;
                let (a, b) = if tables[i + 1][res as usize] != u64::MAX {
                    (0, tables[i + 1][res as usize])
                } else {
                    (1, tables[i + 1][(m - res) as usize])
                };
                v[i] = a;
                v[i + 1] = b;
                i += 2;
            } else {
                v[i] = tables[i][(n % m) as usize];
                i += 1;
            }
        }
        logs[n as usize] = Some(v);
    }
    logs
}

fn conductor(values: &[Complex64], q: u64) -> u64 {
    let mut divisors: Vec<u64> = (1..=q).filter(|d| q.is_multiple_of(*d)).collect();
    divisors.sort_unstable();
    for d in divisors {
        let trivial = (0..q)
            .filter(|&n| gcd(n, q) == 1 && n % d == 1 % d)
            .all(|n| (values[n as usize] - 1.0).norm() < 1e-9);
        if trivial {
            return d;
        }
    }
    q
}

impl CharacterTable {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 || q > MAX_MODULUS {
            return Err(Error::invalid(format!(
                "character modulus {q} outside 1..={MAX_MODULUS}"
            )));
        }
        let factors = cyclic_factors(q);
        let logs = discrete_logs(q, &factors);
        let orders: Vec<u64> = factors.iter().map(|f| f.order).collect();
        let count: u64 = orders.iter().product();
        let mut characters = Vec::with_capacity(count as usize);
        for idx in 0..count {
            let mut index = Vec::with_capacity(orders.len());
            let mut rest = idx;
            for &o in &orders {
                index.push(rest % o);
                rest /= o;
            }
            let values: Vec<Complex64> = logs
                .iter()
                .map(|l| match l {
                    None => Complex64::new(0.0, 0.0),
                    Some(v) => {
                        let mut frac = 0.0;
                        for ((j, x), o) in index.iter().zip(v).zip(&orders) {
                            frac += ((j * x) % o) as f64 / *o as f64;
                        }
                        e(frac)
                    }
                })
                .collect();
            let conductor = conductor(&values, q);
            characters.push(Character {
                modulus: q,
                index,
                values,
                conductor,
            });
        }
        let gauss_sums = characters.iter().map(|c| c.conj().gauss_sum()).collect();
        Ok(CharacterTable {
            modulus: q,
            characters,
            gauss_sums,
        })
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn principal(&self) -> &Character {
        &self.characters[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_phi;

    #[test]
    fn sizes_and_principal() {
        for q in 1..=60 {
            let t = CharacterTable::new(q).unwrap();
            assert_eq!(t.len() as u64, euler_phi(q), "q={q}");
            assert!(t.principal().is_principal());
        }
        let one = CharacterTable::new(1).unwrap();
        assert_eq!(one.characters[0].values, vec![Complex64::new(1.0, 0.0)]);
        assert!((one.gauss_sums[0] - 1.0).norm() < 1e-15);
        assert!(CharacterTable::new(0).is_err());
    }

    #[test]
    fn multiplicative_and_orthogonal() {
        for q in [4u64, 8, 9, 12, 15, 16, 24, 32, 45, 60] {
            let t = CharacterTable::new(q).unwrap();
            for c in &t.characters {
                for a in 0..q {
                    for b in 0..q {
                        let lhs = c.eval(a * b);
                        assert!((lhs - c.eval(a) * c.eval(b)).norm() < 1e-12);
                    }
                }
            }
            for (i, c1) in t.characters.iter().enumerate() {
                for (j, c2) in t.characters.iter().enumerate() {
                    let s: Complex64 = (0..q).map(|n| c1.eval(n) * c2.eval(n).conj()).sum();
                    let want = if i == j { euler_phi(q) as f64 } else { 0.0 };
                    assert!((s - want).norm() < 1e-10, "q={q}");
                }
            }
        }
    }

    /// Primitivity from the group structure: on each p^k factor the character must not
    /// come from p^{k−1}.
    fn primitive_by_structure(c: &Character) -> bool {
        let mut i = 0;
        let mut ok = true;
        for (p, k) in factorize(c.modulus) {
            if p == 2 {
                match k {
                    1 => ok = false,
                    2 => {
                        ok &= c.index[i] == 1;
                        i += 1;
                    }
                    _ => {
                        ok &= c.index[i + 1] % 2 == 1;
                        i += 2;
                    }
                }
            } else {
                let j = c.index[i];
                ok &= if k == 1 { j != 0 } else { !j.is_multiple_of(p) };
                i += 1;
            }
        }
        ok
    }

    #[test]
    fn conductor_matches_structure_and_gauss_modulus() {
        for q in 1..=120u64 {
            let t = CharacterTable::new(q).unwrap();
            for (c, tau) in t.characters.iter().zip(&t.gauss_sums) {
                let prim = q == 1 || primitive_by_structure(c);
                assert_eq!(c.is_primitive(), prim, "q={q} index={:?}", c.index);
                if c.is_primitive() {
                    assert!((tau.norm() - (q as f64).sqrt()).abs() < 1e-10);
                }
            }
        }
    }
}
