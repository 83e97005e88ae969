//! Library functions against plain Rust reimplementations.

use arith_core::primrec::{library, Machine, PrfFn};

fn sieve(n: usize) -> Vec<bool> {
    let mut prime = vec![true; n + 1];
    prime[0] = false;
    if n >= 1 {
        prime[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if prime[i] {
            (i * i..=n).step_by(i).for_each(|j| prime[j] = false);
        }
        i += 1;
    }
    prime
}

fn run(m: &mut Machine, f: &PrfFn, args: &[u64]) -> u64 {
    m.eval(f, args).unwrap()
}

#[test]
fn factorial_and_powers() {
    let lib = library();
    let mut m = Machine::new();
    let mut fact = 1u64;
    for n in 0..=10u64 {
        if n > 0 {
            fact *= n;
        }
        assert_eq!(run(&mut m, &lib.factorial, &[n]), fact, "{n}!");
    }
    for base in 0..=6u64 {
        for e in 0..=6u32 {
            assert_eq!(run(&mut m, &lib.exp, &[base, u64::from(e)]), base.pow(e), "{base}^{e}");
        }
    }
}

#[test]
fn division() {
    let lib = library();
    let mut m = Machine::new();
    for x in 0..=60u64 {
        for y in 0..=60u64 {
            let (q, r) = if y == 0 { (0, x) } else { (x / y, x % y) };
            assert_eq!(run(&mut m, &lib.quotient, &[x, y]), q, "{x}/{y}");
            assert_eq!(run(&mut m, &lib.rem, &[x, y]), r, "{x} mod {y}");
            let divides = if x == 0 { y == 0 } else { y % x == 0 };
            assert_eq!(run(&mut m, &lib.divides, &[x, y]), u64::from(divides), "{x} | {y}");
        }
    }
}

#[test]
fn comparisons() {
    let lib = library();
    let mut m = Machine::new();
    for x in 0..=30u64 {
        assert_eq!(run(&mut m, &lib.pred, &[x]), x.saturating_sub(1));
        assert_eq!(run(&mut m, &lib.sg, &[x]), u64::from(x > 0));
        assert_eq!(run(&mut m, &lib.nsg, &[x]), u64::from(x == 0));
        for y in 0..=30u64 {
            assert_eq!(run(&mut m, &lib.add, &[x, y]), x + y);
            assert_eq!(run(&mut m, &lib.mul, &[x, y]), x * y);
            assert_eq!(run(&mut m, &lib.monus, &[x, y]), x.saturating_sub(y));
            assert_eq!(run(&mut m, &lib.eq, &[x, y]), u64::from(x == y));
            assert_eq!(run(&mut m, &lib.lt, &[x, y]), u64::from(x < y));
            assert_eq!(run(&mut m, &lib.min, &[x, y]), x.min(y));
        }
    }
}

#[test]
fn primes() {
    let lib = library();
    let mut m = Machine::new();
    let table = sieve(200);
    for n in 0..=200u64 {
        assert_eq!(run(&mut m, &lib.is_prime, &[n]) == 1, table[n as usize], "{n}");
        let divisors = (1..=n).filter(|d| n % d == 0).count() as u64;
        assert_eq!(run(&mut m, &lib.divisor_count, &[n]), divisors, "d({n})");
    }
    let primes: Vec<u64> = (0..=200u64).filter(|n| table[*n as usize]).collect();
    for (i, p) in primes.iter().take(12).enumerate() {
        assert_eq!(run(&mut m, &lib.nth_prime, &[i as u64]), *p, "prime #{i}");
    }
}

#[test]
fn prime_exponents() {
    let lib = library();
    let mut m = Machine::new();
    let primes = [2u64, 3, 5, 7];
    for n in 1..=120u64 {
        for (i, p) in primes.iter().enumerate() {
            let mut k = n;
            let mut e = 0;
            while k % p == 0 {
                k /= p;
                e += 1;
            }
            assert_eq!(run(&mut m, &lib.exponent_of_prime, &[n, i as u64]), e, "v_{p}({n})");
        }
        let len = primes.iter().take_while(|p| n % *p == 0).count() as u64;
        assert_eq!(run(&mut m, &lib.seq_len, &[n]), len, "len({n})");
    }
}
