use popuc::pencil::{solve, zeros_by_bisection};
use popuc::recurrence::CoefficientData;
use popuc::spectral::{verify_discrete_orthogonality, verify_phi_orthogonality};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instances() -> Vec<(CoefficientData<f64>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..200)
        .map(|i| {
            let c: Vec<f64> = (0..27).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let mut prev = 0.0;
            let mut d = Vec::with_capacity(26);
            for _ in 0..26 {
                let ell: f64 = rng.gen_range(0.05..0.95);
                d.push((1.0 - prev) * ell);
                prev = ell;
            }
            (CoefficientData::new(c, d).unwrap(), 2 + (i % 24))
        })
        .collect()
}

#[test]
fn dbg06() {
    let mut worst = (0.0_f64, 0usize, 0usize);
    let mut worst_scaled = (0.0_f64, 0usize, 0.0_f64);
    for (idx, (cd, n)) in instances().into_iter().enumerate() {
        let sol = solve(&cd, n).unwrap();
        let bis = zeros_by_bisection(&cd, n).unwrap();
        for (a, b) in sol.nodes.iter().zip(&bis) {
            let dev = (a - b).abs();
            if dev > worst.0 {
                worst = (dev, idx, n);
            }
            let sc = dev / a.abs().max(1.0);
            if sc > worst_scaled.0 {
                worst_scaled = (sc, idx, *a);
            }
        }
    }
    println!("dbg06 worst abs dev {:.3e} at instance {} n={}", worst.0, worst.1, worst.2);
    println!(
        "dbg06 worst scaled dev {:.3e} at instance {} node {:.6e}",
        worst_scaled.0, worst_scaled.1, worst_scaled.2
    );
    let (cd, n) = instances().swap_remove(worst.1);
    let sol = solve(&cd, n).unwrap();
    let bis = zeros_by_bisection(&cd, n).unwrap();
    println!("solve: {:?}", sol.nodes);
    println!("bisec: {bis:?}");
    println!("residual: {:.3e}", sol.residual);
}

#[test]
fn dbg08() {
    for target in [185usize, 93] {
        let (cd, n) = instances().swap_remove(target);
        let d2: Vec<f64> = (2..=cd.max_degree())
            .map(|j| {
                let s = cd.d(j).sqrt();
                s * s
            })
            .collect();
        let c: Vec<f64> = (1..=cd.max_degree()).map(|k| cd.c(k)).collect();
        let cd2 = CoefficientData::new(c, d2).unwrap();
        let sol = solve(&cd, n).unwrap();
        let bis = zeros_by_bisection(&cd, n).unwrap();
        let bis2 = zeros_by_bisection(&cd2, n).unwrap();
        println!(
            "dbg08 inst {target}: solve {:.6} bis(d) {:.6} bis(s^2) {:.6}",
            sol.nodes[n - 1],
            bis[n - 1],
            bis2[n - 1]
        );
    }
}

mod ddref {
    #[derive(Clone, Copy)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let t = s - a;
        (s, (a - (s - t)) + (b - t))
    }
    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }
    impl Dd {
        pub fn renorm(hi: f64, lo: f64) -> Self {
            let (s, e) = two_sum(hi, lo);
            Dd { hi: s, lo: e }
        }
        pub fn from(v: f64) -> Self {
            Dd { hi: v, lo: 0.0 }
        }
        pub fn prod(a: f64, b: f64) -> Self {
            let (p, e) = two_prod(a, b);
            Dd { hi: p, lo: e }
        }
        pub fn diff(a: f64, b: f64) -> Self {
            let (s, e) = two_sum(a, -b);
            Dd { hi: s, lo: e }
        }
        pub fn add(self, o: Self) -> Self {
            let (s, e) = two_sum(self.hi, o.hi);
            Dd::renorm(s, e + self.lo + o.lo)
        }
        pub fn sub(self, o: Self) -> Self {
            let (s, e) = two_sum(self.hi, -o.hi);
            Dd::renorm(s, e + self.lo - o.lo)
        }
        pub fn mul(self, o: Self) -> Self {
            let (p, e) = two_prod(self.hi, o.hi);
            Dd::renorm(p, e + self.hi * o.lo + self.lo * o.hi)
        }
        pub fn div(self, o: Self) -> Self {
            let q1 = self.hi / o.hi;
            let r = self.sub(o.mul(Dd::from(q1)));
            Dd::renorm(q1, (r.hi + r.lo) / o.hi)
        }
        pub fn neg(self) -> Self {
            Dd { hi: -self.hi, lo: -self.lo }
        }
        pub fn scale2(self, s: f64) -> Self {
            Dd {
                hi: self.hi * s,
                lo: self.lo * s,
            }
        }
        pub fn sig(self) -> i8 {
            let v = if self.hi == 0.0 { self.lo } else { self.hi };
            if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            }
        }
    }
    /// Sturm count with dd coefficient values for d.
    pub fn count_above(c: &[f64], dvals: &[Dd], k: usize, x: f64) -> usize {
        let quad = {
            let (p, e) = two_prod(x, x);
            Dd::renorm(p, e + 1.0)
        };
        let big = 2f64.powi(512);
        let small = 2f64.powi(-512);
        let mut changes = 0usize;
        let mut last = 1i8;
        let mut prev = Dd::from(1.0);
        let mut cur = Dd::diff(x, c[0]);
        for j in 1..=k {
            if j > 1 {
                let next = Dd::diff(x, c[j - 1])
                    .mul(cur)
                    .sub(quad.mul(dvals[j - 2]).mul(prev));
                prev = cur;
                cur = next;
                let m = prev.hi.abs().max(cur.hi.abs());
                if m > big {
                    prev = prev.scale2(small);
                    cur = cur.scale2(small);
                } else if m > 0.0 && m < small {
                    prev = prev.scale2(big);
                    cur = cur.scale2(big);
                }
            }
            let s = cur.sig();
            if s != 0 {
                if s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }
    pub fn lowest_zero(c: &[f64], dvals: &[Dd], n: usize) -> f64 {
        let mut lo = -(1.0 + c[0].abs());
        while count_above(c, dvals, n, lo) < n {
            lo += lo;
        }
        let mut hi = 1.0 + c[0].abs();
        while count_above(c, dvals, n, hi) > 0 {
            hi += hi;
        }
        let (mut a, mut b) = (lo, hi);
        for _ in 0..300 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_above(c, dvals, n, mid) >= n {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}

#[test]
fn dbg09() {
    for target in [185usize, 93] {
        let (cd, n) = instances().swap_remove(target);
        let c: Vec<f64> = (1..=cd.max_degree()).map(|k| cd.c(k)).collect();
        let d_exact: Vec<ddref::Dd> = (2..=cd.max_degree())
            .map(|j| ddref::Dd::from(cd.d(j)))
            .collect();
        let d_ssq: Vec<ddref::Dd> = (2..=cd.max_degree())
            .map(|j| ddref::Dd::prod(cd.d(j).sqrt(), cd.d(j).sqrt()))
            .collect();
        let sol = solve(&cd, n).unwrap();
        let z_d = ddref::lowest_zero(&c, &d_exact, n);
        let z_s = ddref::lowest_zero(&c, &d_ssq, n);
        println!(
            "dbg09 inst {target}: solve {:.6} zero(d) {:.6} zero(s^2) {:.6}",
            sol.nodes[n - 1],
            z_d,
            z_s
        );
    }
}

#[test]
fn dbg07() {
    let mut worst = (0.0_f64, 0usize, "");
    for (idx, (cd, _)) in instances().into_iter().enumerate() {
        let a = verify_discrete_orthogonality(&cd, 8).unwrap().max();
        let b = verify_phi_orthogonality(&cd, 8).unwrap().max();
        if a > worst.0 {
            worst = (a, idx, "discrete");
        }
        if b > worst.0 {
            worst = (b, idx, "phi");
        }
    }
    println!("dbg07 worst {:.3e} at instance {} ({})", worst.0, worst.1, worst.2);
}

#[test]
fn dbg10() {
    use popuc::pencil::build_pencil;
    use popuc::spectral::{quadrature, weights_from_vectors};
    let mut worst = (0.0_f64, 0usize, 0usize, 0.0, 0.0, 0.0);
    for (idx, (cd, n)) in instances().into_iter().enumerate() {
        let sol = solve(&cd, n).unwrap();
        let q = quadrature(&cd, n).unwrap();
        let p = build_pencil(&cd, n).unwrap();
        let oracle = weights_from_vectors(&p, &sol.vectors);
        for ((a, b), x) in q.lambda.iter().zip(&oracle).zip(&sol.nodes) {
            let dev = (a - b).abs() / b.abs();
            if dev > worst.0 {
                worst = (dev, idx, n, *a, *b, *x);
            }
        }
    }
    println!(
        "dbg10 worst weight dev {:.3e} at instance {} n={} wron {:.12e} oracle {:.12e} node {:.6e}",
        worst.0, worst.1, worst.2, worst.3, worst.4, worst.5
    );
}

#[test]
fn dbg11() {
    let mut min_same = (f64::INFINITY, 0usize);
    let mut min_cross = (f64::INFINITY, 0usize);
    let mut min_cross_scaled = (f64::INFINITY, 0usize);
    let mut violations = 0usize;
    for (idx, (cd, n)) in instances().into_iter().enumerate() {
        let upper = solve(&cd, n).unwrap().nodes;
        let lower = zeros_by_bisection(&cd, n - 1).unwrap();
        for w in upper.windows(2) {
            if w[0] - w[1] < min_same.0 {
                min_same = (w[0] - w[1], idx);
            }
        }
        for w in lower.windows(2) {
            if w[0] - w[1] < min_same.0 {
                min_same = (w[0] - w[1], idx);
            }
        }
        for i in 0..n - 1 {
            let above = upper[i] - lower[i];
            let below = lower[i] - upper[i + 1];
            for g in [above, below] {
                if g <= 0.0 {
                    violations += 1;
                }
                if g < min_cross.0 {
                    min_cross = (g, idx);
                }
                let sc = g / upper[i].abs().max(1.0);
                if sc < min_cross_scaled.0 {
                    min_cross_scaled = (sc, idx);
                }
            }
        }
    }
    println!(
        "dbg11 min same-poly gap {:.3e} (inst {}) min cross gap {:.3e} (inst {}) scaled {:.3e} (inst {}) violations {}",
        min_same.0, min_same.1, min_cross.0, min_cross.1, min_cross_scaled.0, min_cross_scaled.1, violations
    );
}

#[test]
fn dbg12() {
    use popuc::pencil::build_pencil;
    use popuc::spectral::{quadrature, weights_from_vectors};
    let (cd, n) = instances().swap_remove(119);
    println!("dbg12 n={n} max_degree={}", cd.max_degree());
    let sol = solve(&cd, n).unwrap();
    let q = quadrature(&cd, n).unwrap();
    let p = build_pencil(&cd, n).unwrap();
    let oracle = weights_from_vectors(&p, &sol.vectors);
    let c1 = cd.c(1);
    let qw = 0.25 * (1.0 + c1 * c1);
    let mut sum_wron = 0.0;
    let mut sum_orac = 0.0;
    for r in 0..n {
        let hatf = qw * (q.zeta[r] - num_complex::Complex64::new(1.0, 0.0)).norm_sqr();
        sum_wron += hatf * q.lambda[r];
        sum_orac += hatf * oracle[r];
        let dev = (q.lambda[r] - oracle[r]).abs() / oracle[r].abs();
        if dev > 1e-9 || r < 3 {
            println!(
                "  r={r} node {:+.9e} wron {:.12e} orac {:.12e} dev {:.2e}",
                sol.nodes[r], q.lambda[r], oracle[r], dev
            );
        }
    }
    println!("  sum lambda_hat: wron {:.15} orac {:.15}", sum_wron, sum_orac);
    println!("  node range: [{:.6e}, {:.6e}]", sol.nodes[n - 1], sol.nodes[0]);
}

#[test]
fn dbg13() {
    use ddref::Dd;
    // independent evaluation of 1/lambda = u^H B u from the recurrence
    let (cd, n) = instances().swap_remove(185);
    let sol = solve(&cd, n).unwrap();
    let x0 = sol.nodes[n - 1]; // escaped node, most negative
    let c: Vec<f64> = (1..=cd.max_degree()).map(|j| cd.c(j)).collect();
    let d: Vec<f64> = (2..=cd.max_degree()).map(|j| cd.d(j)).collect();
    // dd Newton polish on P_n
    let states = |x: Dd, upto: usize| -> (Vec<(Dd, i64)>, Dd, Dd, i64) {
        // returns scaled P_0..P_upto with shared running exponents, plus
        // (P_upto, P'_upto, e_final)
        let quad = x.mul(x).add(Dd::from(1.0));
        let two_x = x.scale2(2.0);
        let big = 2f64.powi(256);
        let small = 2f64.powi(-256);
        let mut list: Vec<(Dd, i64)> = Vec::new();
        let mut e: i64 = 0;
        let mut p_prev = Dd::from(1.0);
        let mut p_cur = x.sub(Dd::from(c[0]));
        let mut dp_prev = Dd::from(0.0);
        let mut dp_cur = Dd::from(1.0);
        list.push((p_prev, 0));
        list.push((p_cur, 0));
        for j in 2..=upto {
            let dj = Dd::from(d[j - 2]);
            let xc = x.sub(Dd::from(c[j - 1]));
            let p_next = xc.mul(p_cur).sub(quad.mul(dj).mul(p_prev));
            let dp_next = p_cur
                .add(xc.mul(dp_cur))
                .sub(two_x.mul(p_prev).mul(dj))
                .sub(quad.mul(dp_prev).mul(dj));
            p_prev = p_cur;
            p_cur = p_next;
            dp_prev = dp_cur;
            dp_cur = dp_next;
            let m = p_prev.hi.abs().max(p_cur.hi.abs());
            if m > big {
                p_prev = p_prev.scale2(small);
                p_cur = p_cur.scale2(small);
                dp_prev = dp_prev.scale2(small);
                dp_cur = dp_cur.scale2(small);
                e += 256;
            } else if m > 0.0 && m < small {
                p_prev = p_prev.scale2(big);
                p_cur = p_cur.scale2(big);
                dp_prev = dp_prev.scale2(big);
                dp_cur = dp_cur.scale2(big);
                e -= 256;
            }
            list.push((p_cur, e));
        }
        (list, p_cur, dp_cur, e)
    };
    let mut x = Dd::from(x0);
    for _ in 0..3 {
        let (_, p, dp, _) = states(x, n);
        let corr = p.div(dp);
        x = x.sub(corr);
    }
    // u^H B u = sum_k P_k^2 r_k  - 2x sum_k P_k P_{k+1} r_k / quad,
    // r_k = 1/((x^2+1)^k prod_{j<=k} d_{j+1}), terms aligned by exponent
    let (list, _, _, _) = states(x, n - 1);
    let quad = x.mul(x).add(Dd::from(1.0));
    let mut r = Dd::from(1.0);
    let mut rf: i64 = 0; // r true value = r * 2^rf
    let mut acc = Dd::from(0.0);
    let mut acc_e: i64 = 0; // acc true value = acc * 2^acc_e
    let norm = |v: &mut Dd, e: &mut i64| {
        if v.hi != 0.0 {
            let ex = v.hi.abs().log2().floor() as i64;
            *v = v.scale2(2f64.powi(-ex as i32));
            *e += ex;
        }
    };
    let mut push = |acc: &mut Dd, acc_e: &mut i64, term: Dd, te: i64| {
        let mut term = term;
        let mut te = te;
        if term.hi == 0.0 {
            return;
        }
        norm(&mut term, &mut te);
        if acc.hi == 0.0 {
            *acc = term;
            *acc_e = te;
            return;
        }
        norm(acc, acc_e);
        let delta = te - *acc_e;
        if delta > 140 {
            *acc = term;
            *acc_e = te;
        } else if delta < -140 {
            // term negligible
        } else if delta >= 0 {
            *acc = acc.scale2(2f64.powi(-delta as i32)).add(term);
            *acc_e = te;
        } else {
            *acc = acc.add(term.scale2(2f64.powi(delta as i32)));
        }
    };
    for k in 0..n {
        let (pk, ek) = list[k];
        let a = pk.mul(pk).mul(r);
        push(&mut acc, &mut acc_e, a, 2 * ek + rf);
        if k + 1 < n {
            let (pk1, ek1) = list[k + 1];
            let cterm = pk.mul(pk1).mul(r).div(quad).mul(x.scale2(2.0)).neg();
            push(&mut acc, &mut acc_e, cterm, ek + ek1 + rf);
        }
        // advance r to r_{k+1} = r_k / (quad * d_{k+2})
        if k + 1 < n {
            r = r.div(quad.mul(Dd::from(d[k])));
            // renormalize r's exponent
            if r.hi != 0.0 {
                let ex = r.hi.abs().log2().floor() as i64;
                if ex.abs() > 200 {
                    r = r.scale2(2f64.powi(-ex as i32));
                    rf += ex;
                }
            }
        }
    }
    let inv = Dd::from(1.0).div(acc);
    let lam_ref = (inv.hi + inv.lo) * 2f64.powi(-acc_e as i32);
    println!("dbg13 node {:.9e}", x.hi);
    println!("dbg13 ref lambda {:.12e}", lam_ref);
}
