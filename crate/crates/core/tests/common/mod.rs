//! Independent oracles shared by the integration tests. Nothing here calls
//! the library routine it is used to check.

#![allow(dead_code)]

use std::f64::consts::PI;

use pretzel_fal::crushtacean::{Edge, EdgeColor, EmbeddedGraph, Orientation};
use pretzel_fal::hypgeom::{BigReal, RealContext};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Totient by counting.
pub fn totient_brute(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `σ_a(2cos(π/n)i)` evaluated by substituting `ζ_L ↦ e^{2πia/L}` into
/// `ζ_L^{L/4}(ζ_L^{L/2n} + ζ_L^{−L/2n})`.
fn conjugate(n: u64, level: u64, a: u64) -> (f64, f64) {
    let q = (level / 4) as f64;
    let s = (level / (2 * n)) as f64;
    let ang = |e: f64| 2.0 * PI * a as f64 * e / level as f64;
    let (p, m) = (ang(q + s), ang(q - s));
    (p.cos() + m.cos(), p.sin() + m.sin())
}

/// Number of distinct Galois conjugates of the cusp generator, counted in ℂ.
pub fn conjugate_count(n: u64) -> usize {
    let level = lcm(4, 2 * n);
    let mut seen: Vec<(f64, f64)> = Vec::new();
    for a in (1..level).filter(|&a| gcd(a, level) == 1) {
        let z = conjugate(n, level, a);
        if !seen
            .iter()
            .any(|w| (w.0 - z.0).abs() < 1e-9 && (w.1 - z.1).abs() < 1e-9)
        {
            seen.push(z);
        }
    }
    seen.len()
}

/// Stabilizer comparison at the common level, entirely in floating point.
pub fn numeric_same_field(m: u64, n: u64) -> bool {
    let level = lcm(lcm(4, 2 * m), lcm(4, 2 * n));
    let fixed = |k: u64, a: u64| {
        let g = conjugate(k, level, 1);
        let h = conjugate(k, level, a);
        (g.0 - h.0).abs() < 1e-9 && (g.1 - h.1).abs() < 1e-9
    };
    (1..level)
        .filter(|&a| gcd(a, level) == 1)
        .all(|a| fixed(m, a) == fixed(n, a))
}

/// `𝓛(θ) = −∫₀^θ ln|2 sin x| dx` for `0 < θ < π` by tanh-sinh quadrature:
/// `x = θ/(1 + e^{−2u})`, `u = (π/2)sinh t`, `|t| ≤ 5`, halving the step
/// until two levels agree to `10^{-tol_exp}`.
pub fn lobachevsky_quadrature(ctx: &mut RealContext, theta: &BigReal, tol_exp: usize) -> BigReal {
    let half_pi = ctx.pi_ratio(1, 2);
    let tol = ctx.ten_pow_neg(tol_exp);
    let one = ctx.int(1);
    let two = ctx.int(2);
    let t_max = 5i64;
    let node = |ctx: &mut RealContext, t: &BigReal| -> BigReal {
        let u = &half_pi * &ctx.sinh(t);
        let e = ctx.exp(&(-(&u * &two)));
        let x = theta / &(&one + &e);
        if x.is_zero() {
            return ctx.int(0);
        }
        let s = ctx.sin(&x);
        let f = ctx.ln(&(&s * &two)).expect("positive sine");
        let ch = ctx.cosh(&u);
        let w = &(&(theta * &half_pi) * &ctx.cosh(t)) / &(&(&ch * &ch) * &two);
        &f * &w
    };
    let mut h = ctx.ratio(1, 2);
    let mut sum = node(ctx, &ctx.int(0));
    let mut k = 1i64;
    loop {
        let t = &h * &ctx.int(k);
        if t > ctx.int(t_max) {
            break;
        }
        sum = &(&sum + &node(ctx, &t)) + &node(ctx, &-t.clone());
        k += 1;
    }
    let mut prev = -(&sum * &h);
    loop {
        // new nodes sit at odd multiples of the halved step
        h = &h / &two;
        let mut k = 1i64;
        loop {
            let t = &h * &ctx.int(k);
            if t > ctx.int(t_max) {
                break;
            }
            sum = &(&sum + &node(ctx, &t)) + &node(ctx, &-t.clone());
            k += 2;
        }
        let cur = -(&sum * &h);
        if (&cur - &prev).abs() < tol || h < ctx.ten_pow_neg(6) {
            return cur;
        }
        prev = cur;
    }
}

/// `ℓ(γ) = 4 ln tan(π/4 + π/2n)`, an independent form of the closed
/// geodesic length `2 ln((cscθ+1)/(cscθ−1))`, `θ = π/n`.
pub fn geodesic_length_tan(ctx: &mut RealContext, n: u64) -> BigReal {
    let n = n as i64;
    let a = ctx.pi_ratio(n + 2, 4 * n);
    let t = ctx.tan(&a);
    &ctx.ln(&t).expect("tan > 1") * &ctx.int(4)
}

// ---------------------------------------------------------------- graphs

pub struct Shape {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, EdgeColor)>,
}

impl Shape {
    fn plain(vertices: usize, pairs: &[(usize, usize)]) -> Self {
        Self {
            vertices,
            edges: pairs.iter().map(|&(a, b)| (a, b, EdgeColor::Plain)).collect(),
        }
    }

    /// Embeds with a random rotation at every vertex.
    pub fn embed<R: Rng>(&self, rng: &mut R) -> EmbeddedGraph {
        let mut rot = vec![Vec::new(); self.vertices];
        for (i, &(a, b, _)) in self.edges.iter().enumerate() {
            rot[a].push(i);
            rot[b].push(i);
        }
        for r in &mut rot {
            r.shuffle(rng);
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b, color)| Edge { ends: [a, b], color })
            .collect();
        EmbeddedGraph::new(self.vertices, edges, rot).expect("valid shape")
    }

    pub fn recolor<R: Rng>(&mut self, rng: &mut R, p_green: f64) {
        for e in &mut self.edges {
            e.2 = if rng.gen_bool(p_green) {
                EdgeColor::Green
            } else {
                EdgeColor::Plain
            };
        }
    }
}

pub fn k4() -> Shape {
    Shape::plain(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

pub fn k33() -> Shape {
    let mut p = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            p.push((a, b));
        }
    }
    Shape::plain(6, &p)
}

pub fn petersen() -> Shape {
    let mut p = Vec::new();
    for i in 0..5 {
        p.push((i, (i + 1) % 5));
        p.push((i, i + 5));
        p.push((5 + i, 5 + (i + 2) % 5));
    }
    Shape::plain(10, &p)
}

pub fn prism(k: usize) -> Shape {
    let mut p = Vec::new();
    for i in 0..k {
        p.push((i, k + i));
        p.push((i, (i + 1) % k));
        p.push((k + i, k + (i + 1) % k));
    }
    Shape::plain(2 * k, &p)
}

/// Cycle of length `2k` with its `k` long diagonals.
pub fn mobius_ladder(k: usize) -> Shape {
    let m = 2 * k;
    let mut p = Vec::new();
    for i in 0..m {
        p.push((i, (i + 1) % m));
    }
    for i in 0..k {
        p.push((i, i + k));
    }
    Shape::plain(m, &p)
}

/// Random connected simple cubic graph on `v` (even) vertices, by the
/// pairing model with rejection.
pub fn random_cubic<R: Rng>(rng: &mut R, v: usize) -> Shape {
    loop {
        let mut points: Vec<usize> = (0..3 * v).map(|i| i / 3).collect();
        points.shuffle(rng);
        let mut pairs = Vec::new();
        let mut ok = true;
        for c in points.chunks(2) {
            let (a, b) = (c[0].min(c[1]), c[0].max(c[1]));
            if a == b || pairs.contains(&(a, b)) {
                ok = false;
                break;
            }
            pairs.push((a, b));
        }
        if ok && connected(v, &pairs) {
            return Shape::plain(v, &pairs);
        }
    }
}

fn connected(v: usize, pairs: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in pairs {
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// All color-preserving vertex automorphisms of a simple graph, each tagged
/// with the orientations of the rotation system it respects.
pub fn vertex_automorphisms(g: &EmbeddedGraph) -> Vec<(Vec<usize>, Vec<Orientation>)> {
    let n = g.vertex_count();
    let mut adj = vec![vec![None; n]; n];
    for e in g.edges() {
        let [a, b] = e.ends;
        adj[a][b] = Some(e.color);
        adj[b][a] = Some(e.color);
    }
    let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        i: usize,
        n: usize,
        adj: &[Vec<Option<EdgeColor>>],
        deg: &[usize],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == n {
            out.push(perm.clone());
            return;
        }
        for t in 0..n {
            if used[t] || deg[t] != deg[i] {
                continue;
            }
            if (0..i).all(|j| adj[i][j] == adj[t][perm[j]]) {
                perm[i] = t;
                used[t] = true;
                rec(i + 1, n, adj, deg, perm, used, out);
                used[t] = false;
            }
        }
        perm[i] = usize::MAX;
    }
    let mut perms = Vec::new();
    rec(0, n, &adj, &deg, &mut perm, &mut used, &mut perms);
    for p in perms {
        let orients: Vec<Orientation> = [Orientation::Preserving, Orientation::Reversing]
            .into_iter()
            .filter(|&o| respects_rotation(g, &p, o))
            .collect();
        out.push((p, orients));
    }
    out
}

fn edge_between(g: &EmbeddedGraph, a: usize, b: usize) -> usize {
    g.edges()
        .iter()
        .position(|e| e.ends == [a, b] || e.ends == [b, a])
        .expect("adjacent")
}

fn respects_rotation(g: &EmbeddedGraph, p: &[usize], o: Orientation) -> bool {
    (0..g.vertex_count()).all(|v| {
        let image: Vec<usize> = g
            .rotation(v)
            .iter()
            .map(|&e| {
                let [a, b] = g.edges()[e].ends;
                let w = if a == v { b } else { a };
                edge_between(g, p[v], p[w])
            })
            .collect();
        let mut target = g.rotation(p[v]).to_vec();
        if o == Orientation::Reversing {
            target.reverse();
        }
        let k = target.len();
        (0..k).any(|s| (0..k).all(|i| image[i] == target[(i + s) % k]))
    })
}

/// Whether an involutive automorphism of orientation `o` swaps the ends of
/// edge `e`.
pub fn oracle_edge_involution(
    auts: &[(Vec<usize>, Vec<Orientation>)],
    g: &EmbeddedGraph,
    e: usize,
    o: Orientation,
) -> bool {
    let [a, b] = g.edges()[e].ends;
    auts.iter().any(|(p, os)| {
        os.contains(&o) && p[a] == b && p[b] == a && (0..p.len()).all(|v| p[p[v]] == v)
    })
}
