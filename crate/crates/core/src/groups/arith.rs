//! Small-integer number theory.

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = vec![1];
    for (p, e) in factorize(n) {
        let cur = d.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            d.extend(cur.iter().map(|x| x * pk));
        }
    }
    d.sort_unstable();
    d
}

/// Total number of prime factors with multiplicity.
pub fn big_omega(n: u64) -> u32 {
    factorize(n).iter().map(|f| f.1).sum()
}

/// All partitions of `n` into positive parts, each weakly decreasing.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            cur.push(part);
            go(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_prime(97) && !is_prime(1) && !is_prime(91));
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(big_omega(72), 5);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(0), vec![Vec::<u32>::new()]);
    }
}
