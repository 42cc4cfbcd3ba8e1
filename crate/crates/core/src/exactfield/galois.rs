use serde::{Deserialize, Serialize};

use super::cyclo::CycloElement;
use super::FieldError;
use crate::arith::{euler_totient, gcd, unit_residues};

/// A subgroup of `(ℤ/N)*`, stored as its sorted residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitSubgroup {
    modulus: u64,
    members: Vec<u64>,
}

impl UnitSubgroup {
    /// Builds a subgroup from residues, checking closure under multiplication.
    pub fn new(modulus: u64, members: impl IntoIterator<Item = u64>) -> Result<Self, FieldError> {
        if modulus == 0 {
            return Err(FieldError::InvalidModulus(modulus));
        }
        let mut members: Vec<u64> = members.into_iter().map(|a| a % modulus).collect();
        members.sort_unstable();
        members.dedup();
        for &a in &members {
            if modulus > 1 && gcd(a, modulus) != 1 {
                return Err(FieldError::NotCoprime { a, modulus });
            }
        }
        let g = Self { modulus, members };
        let one = 1 % modulus;
        if !g.contains(one) {
            return Err(FieldError::Parse("subgroup must contain 1".into()));
        }
        for &a in &g.members {
            for &b in &g.members {
                if !g.contains(mulmod(a, b, modulus)) {
                    return Err(FieldError::Parse(format!(
                        "residues are not closed: {a}*{b} mod {modulus}"
                    )));
                }
            }
        }
        Ok(g)
    }

    pub fn full(modulus: u64) -> Self {
        Self {
            modulus,
            members: unit_residues(modulus),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// `[(ℤ/N)* : H]`.
    pub fn index(&self) -> u64 {
        euler_totient(self.modulus) / self.order() as u64
    }

    pub fn contains(&self, a: u64) -> bool {
        self.members.binary_search(&(a % self.modulus)).is_ok()
    }

    /// Full preimage under the reduction `(ℤ/L)* → (ℤ/N)*`, for `N | L`.
    pub fn lift(&self, level: u64) -> Result<Self, FieldError> {
        if level == 0 || level % self.modulus != 0 {
            return Err(FieldError::NotMultiple {
                level,
                modulus: self.modulus,
            });
        }
        let members = unit_residues(level)
            .into_iter()
            .filter(|&a| self.contains(a % self.modulus))
            .collect();
        Ok(Self {
            modulus: level,
            members,
        })
    }
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// `σ_a(x)`: the automorphism `ζ_N ↦ ζ_N^a`.
pub fn galois_apply(a: i64, x: &CycloElement) -> Result<CycloElement, FieldError> {
    x.galois(a)
}

/// `{a ∈ (ℤ/N)* : σ_a(x) = x}`.
///
/// Uses the group structure to skip work: products of known members are
/// members, and a known non-member times any member is a non-member.
pub fn stabilizer(x: &CycloElement) -> UnitSubgroup {
    let n = x.modulus();
    let units = unit_residues(n);
    if n <= 2 {
        return UnitSubgroup { modulus: n, members: units };
    }
    let size = n as usize;
    // 0 = unknown, 1 = member, 2 = non-member
    let mut state = vec![0u8; size];
    let mut members = vec![1u64];
    state[1] = 1;
    for &a in &units {
        if state[a as usize] != 0 {
            continue;
        }
        let fixed = x.galois(a as i64).expect("unit") == *x;
        if fixed {
            // close the member set under multiplication by a
            let mut frontier = vec![a];
            state[a as usize] = 1;
            members.push(a);
            while let Some(b) = frontier.pop() {
                let snapshot = members.clone();
                for m in snapshot {
                    let c = mulmod(b, m, n);
                    if state[c as usize] != 1 {
                        state[c as usize] = 1;
                        members.push(c);
                        frontier.push(c);
                    }
                }
            }
        } else {
            for &m in &members {
                state[mulmod(a, m, n) as usize] = 2;
            }
        }
    }
    members.sort_unstable();
    UnitSubgroup { modulus: n, members }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::cyclo::CyclotomicField;
    use crate::exactfield::rational::rat;

    fn brute_stabilizer(x: &CycloElement) -> Vec<u64> {
        unit_residues(x.modulus())
            .into_iter()
            .filter(|&a| x.galois(a as i64).unwrap() == *x)
            .collect()
    }

    #[test]
    fn rational_is_fixed_by_everything() {
        let f = CyclotomicField::new(20).unwrap();
        let q = CycloElement::from_rational(&f, &rat(7, 3));
        assert_eq!(stabilizer(&q), UnitSubgroup::full(20));
    }

    #[test]
    fn i_times_half_in_level_twelve() {
        let f = CyclotomicField::new(12).unwrap();
        // i·cos(π/3) = ζ₁₂³ / 2
        let x = CycloElement::from_exponents(&f, &[(3, rat(1, 2))]);
        assert_eq!(stabilizer(&x).members(), &[1, 5]);
    }

    #[test]
    fn matches_brute_force() {
        for n in [7u64, 15, 16, 21, 24, 36] {
            let f = CyclotomicField::new(n).unwrap();
            let x = CycloElement::from_exponents(
                &f,
                &[(1, rat(1, 1)), (-1, rat(1, 1)), (n as i64 / 3, rat(2, 5))],
            );
            assert_eq!(stabilizer(&x).members(), brute_stabilizer(&x).as_slice(), "N={n}");
        }
    }

    #[test]
    fn lifting_and_validation() {
        let h = UnitSubgroup::new(12, [1, 5]).unwrap();
        let l = h.lift(24).unwrap();
        assert_eq!(l.members(), &[1, 5, 13, 17]);
        assert_eq!(l.index(), h.index());
        assert!(UnitSubgroup::new(12, [1, 5, 7]).is_err());
        assert!(UnitSubgroup::new(12, [1, 2]).is_err());
    }
}
