use std::sync::OnceLock;

use super::PrfFn;

/// The standard functions, each built once so that memoized evaluation
/// can share work between them.
pub struct Library {
    pub pred: PrfFn,
    pub add: PrfFn,
    pub mul: PrfFn,
    pub monus: PrfFn,
    pub sg: PrfFn,
    pub nsg: PrfFn,
    pub eq: PrfFn,
    pub lt: PrfFn,
    pub min: PrfFn,
    pub factorial: PrfFn,
    pub exp: PrfFn,
    /// `rem(x, y) = x mod y`, with `x mod 0 = x`.
    pub rem: PrfFn,
    /// `quotient(x, y) = floor(x / y)`, with `x / 0 = 0`.
    pub quotient: PrfFn,
    /// `divides(d, n)`.
    pub divides: PrfFn,
    pub divisor_count: PrfFn,
    pub is_prime: PrfFn,
    /// `nth_prime(0) = 2`.
    pub nth_prime: PrfFn,
    /// `exponent_of_prime(n, i)`: multiplicity of the `i`-th prime in `n >= 1`.
    pub exponent_of_prime: PrfFn,
    /// Number of leading primes `2, 3, 5, ..` dividing `n`.
    pub seq_len: PrfFn,
}

pub fn library() -> &'static Library {
    static LIB: OnceLock<Library> = OnceLock::new();
    LIB.get_or_init(Library::build)
}

fn p(i: usize, k: usize) -> PrfFn {
    PrfFn::proj(i, k).expect("projection in range")
}

fn c(outer: &PrfFn, inners: &[PrfFn]) -> PrfFn {
    PrfFn::comp(outer.clone(), inners.to_vec()).expect("composition arities")
}

fn r(base: PrfFn, step: PrfFn) -> PrfFn {
    PrfFn::prim_rec(base, step).expect("recursion arities")
}

fn s(f: PrfFn) -> PrfFn {
    c(&PrfFn::succ(), &[f])
}

fn constant(n: u64, arity: usize) -> PrfFn {
    (0..n).fold(PrfFn::zero(arity), |acc, _| s(acc))
}

/// `mu(x.., b)`: least `z < b` with `pred(x.., z) != 0`, else `b`.
pub fn bounded_mu(pred: &PrfFn) -> PrfFn {
    bounded_mu_with(library(), pred)
}

impl Library {
    fn build() -> Library {
        let pred = r(PrfFn::zero(0), p(1, 2));
        let add = r(p(1, 1), s(p(3, 3)));
        let mul = r(PrfFn::zero(1), c(&add, &[p(3, 3), p(1, 3)]));
        let monus = r(p(1, 1), c(&pred, &[p(3, 3)]));
        let sg = r(PrfFn::zero(0), constant(1, 2));
        let nsg = r(constant(1, 0), PrfFn::zero(2));
        let absdiff = c(&add, &[c(&monus, &[p(1, 2), p(2, 2)]), c(&monus, &[p(2, 2), p(1, 2)])]);
        let eq = c(&nsg, &[absdiff.clone()]);
        let ne = c(&sg, &[absdiff]);
        let lt = c(&sg, &[c(&monus, &[p(2, 2), p(1, 2)])]);
        let min = c(&monus, &[p(1, 2), c(&monus, &[p(1, 2), p(2, 2)])]);
        let factorial = r(constant(1, 0), c(&mul, &[p(2, 2), s(p(1, 2))]));
        let exp = r(constant(1, 1), c(&mul, &[p(3, 3), p(1, 3)]));

        // rem_by(y, x) = x mod y, counting up and wrapping at y
        let up = s(p(3, 3));
        let rem_by = r(PrfFn::zero(1), c(&mul, &[up.clone(), c(&ne, &[up, p(1, 3)])]));
        let rem = c(&rem_by, &[p(2, 2), p(1, 2)]);
        // quot_by(y, x): add one whenever n+1 is a multiple of y
        let hit = c(&nsg, &[c(&rem_by, &[p(1, 3), s(p(2, 3))])]);
        let quot_by = r(PrfFn::zero(1), c(&add, &[p(3, 3), hit]));
        let quotient = c(&quot_by, &[p(2, 2), p(1, 2)]);
        let divides = c(&nsg, &[c(&rem, &[p(2, 2), p(1, 2)])]);

        // divisors of n among 1..=k
        let dc_upto = r(PrfFn::zero(1), c(&add, &[p(3, 3), c(&divides, &[s(p(2, 3)), p(1, 3)])]));
        let divisor_count = c(&dc_upto, &[p(1, 1), p(1, 1)]);
        let is_prime = c(&eq, &[divisor_count.clone(), constant(2, 1)]);

        let partial = Library {
            pred,
            add,
            mul,
            monus,
            sg,
            nsg,
            eq,
            lt,
            min,
            factorial,
            exp,
            rem,
            quotient,
            divides,
            divisor_count,
            is_prime,
            nth_prime: PrfFn::zero(1),
            exponent_of_prime: PrfFn::zero(2),
            seq_len: PrfFn::zero(1),
        };
        partial.with_prime_helpers()
    }

    /// Helpers built from bounded minimization, which itself needs the
    /// arithmetic above.
    fn with_prime_helpers(mut self) -> Library {
        let mu = |pred: &PrfFn| bounded_mu_with(&self, pred);

        // next prime above p lies in (p, 2p]
        let above_and_prime = c(&self.mul, &[c(&self.lt, &[p(1, 2), p(2, 2)]), c(&self.is_prime, &[p(2, 2)])]);
        let next_prime = c(&mu(&above_and_prime), &[p(1, 1), s(c(&self.add, &[p(1, 1), p(1, 1)]))]);
        let nth_prime = r(constant(2, 0), c(&next_prime, &[p(2, 2)]));

        // capped_pow(b, c, e) = min(b^e, c)
        let capped_pow = r(
            c(&self.min, &[constant(1, 2), p(2, 2)]),
            c(&self.min, &[c(&self.mul, &[p(4, 4), p(1, 4)]), p(2, 4)]),
        );
        // exponent: least e with p_i^(e+1) not dividing n
        let prime_i = c(&nth_prime, &[p(2, 3)]);
        let power = c(&capped_pow, &[prime_i, s(p(1, 3)), s(p(3, 3))]);
        let stops = c(&self.nsg, &[c(&self.divides, &[power, p(1, 3)])]);
        let exponent_of_prime = c(&mu(&stops), &[p(1, 2), p(2, 2), s(p(1, 2))]);

        let missing = c(&self.nsg, &[c(&self.divides, &[c(&nth_prime, &[p(2, 2)]), p(1, 2)])]);
        let seq_len = c(&mu(&missing), &[p(1, 1), s(p(1, 1))]);

        self.nth_prime = nth_prime;
        self.exponent_of_prime = exponent_of_prime;
        self.seq_len = seq_len;
        self
    }

    pub fn named(&self) -> Vec<(&'static str, &PrfFn)> {
        vec![
            ("pred", &self.pred),
            ("add", &self.add),
            ("mul", &self.mul),
            ("monus", &self.monus),
            ("sg", &self.sg),
            ("nsg", &self.nsg),
            ("eq", &self.eq),
            ("lt", &self.lt),
            ("min", &self.min),
            ("factorial", &self.factorial),
            ("exp", &self.exp),
            ("rem", &self.rem),
            ("quotient", &self.quotient),
            ("divides", &self.divides),
            ("divisor_count", &self.divisor_count),
            ("is_prime", &self.is_prime),
            ("nth_prime", &self.nth_prime),
            ("exponent_of_prime", &self.exponent_of_prime),
            ("seq_len", &self.seq_len),
        ]
    }

    pub fn get(&self, name: &str) -> Option<&PrfFn> {
        self.named().into_iter().find(|(n, _)| *n == name).map(|(_, f)| f)
    }
}

fn bounded_mu_with(lib: &Library, pred: &PrfFn) -> PrfFn {
    // step(x.., n, prev) = prev + eq(prev, n) * nsg(pred(x.., n))
    let k = pred.arity() - 1;
    let a = k + 2;
    let xs_n: Vec<PrfFn> = (1..=k + 1).map(|i| p(i, a)).collect();
    let prev = p(k + 2, a);
    let n = p(k + 1, a);
    let not_found = c(&lib.mul, &[c(&lib.eq, &[prev.clone(), n]), c(&lib.nsg, &[c(pred, &xs_n)])]);
    r(PrfFn::zero(k), c(&lib.add, &[prev, not_found]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primrec::Machine;

    #[test]
    fn examples() {
        let lib = library();
        assert_eq!(lib.factorial.eval(&[0]).unwrap(), 1);
        assert_eq!(lib.factorial.eval(&[4]).unwrap(), 24);
        assert_eq!(lib.exp.eval(&[2, 10]).unwrap(), 1024);
        assert_eq!(lib.quotient.eval(&[7, 2]).unwrap(), 3);
        assert_eq!(lib.is_prime.eval(&[2]).unwrap(), 1);
        assert_eq!(lib.is_prime.eval(&[1]).unwrap(), 0);
        assert_eq!(lib.is_prime.eval(&[91]).unwrap(), 0);
    }

    #[test]
    fn helpers_against_arithmetic() {
        let lib = library();
        let mut m = Machine::new();
        for x in 0..15u64 {
            assert_eq!(m.eval(&lib.pred, &[x]).unwrap(), x.saturating_sub(1));
            for y in 0..15u64 {
                assert_eq!(m.eval(&lib.monus, &[x, y]).unwrap(), x.saturating_sub(y));
                assert_eq!(m.eval(&lib.eq, &[x, y]).unwrap(), u64::from(x == y));
                assert_eq!(m.eval(&lib.lt, &[x, y]).unwrap(), u64::from(x < y));
                assert_eq!(m.eval(&lib.min, &[x, y]).unwrap(), x.min(y));
                assert_eq!(m.eval(&lib.mul, &[x, y]).unwrap(), x * y);
                let rem = if y == 0 { x } else { x % y };
                assert_eq!(m.eval(&lib.rem, &[x, y]).unwrap(), rem);
                let divides = if x == 0 { y == 0 } else { y % x == 0 };
                assert_eq!(m.eval(&lib.divides, &[x, y]).unwrap(), u64::from(divides));
            }
        }
    }

    #[test]
    fn prime_helpers() {
        let lib = library();
        let mut m = Machine::new();
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 19];
        for (i, q) in primes.iter().enumerate() {
            assert_eq!(m.eval(&lib.nth_prime, &[i as u64]).unwrap(), *q);
        }
        // 360 = 2^3 * 3^2 * 5
        assert_eq!(m.eval(&lib.exponent_of_prime, &[360, 0]).unwrap(), 3);
        assert_eq!(m.eval(&lib.exponent_of_prime, &[360, 1]).unwrap(), 2);
        assert_eq!(m.eval(&lib.exponent_of_prime, &[360, 2]).unwrap(), 1);
        assert_eq!(m.eval(&lib.exponent_of_prime, &[360, 3]).unwrap(), 0);
        assert_eq!(m.eval(&lib.seq_len, &[30]).unwrap(), 3);
        assert_eq!(m.eval(&lib.seq_len, &[18]).unwrap(), 2);
        assert_eq!(m.eval(&lib.seq_len, &[10]).unwrap(), 1);
        assert_eq!(m.eval(&lib.seq_len, &[1]).unwrap(), 0);
    }

    #[test]
    fn minimization() {
        let lib = library();
        // least z < b with z*z >= x, i.e. lt(x, z*z + 1)
        let sq_ge = c(&lib.lt, &[p(1, 2), s(c(&lib.mul, &[p(2, 2), p(2, 2)]))]);
        let isqrt_ceil = bounded_mu(&sq_ge);
        assert_eq!(isqrt_ceil.eval(&[10, 20]).unwrap(), 4);
        assert_eq!(isqrt_ceil.eval(&[10, 3]).unwrap(), 3);
    }
}
