//! Constructors for the concrete categories.

use rustc_hash::FxHashMap;

use super::quad::{FormKind, QuadSpace};
use super::{CatError, CatParts, CompTable, FinCat, MorId, ObjData, ObjId, Object, Rule};
use crate::exactla::{Elem, Field, MatF, SpEchelon, SpVec, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VectClass {
    All,
    Inj,
    Surj,
    Iso,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetKind {
    /// Pointed sets `{*, 1..n}` with basepoint-preserving maps.
    Pointed,
    Injections,
    Surjections,
    Bijections,
}

fn check_cap(what: &str, count: u128, cap: usize) -> Result<(), CatError> {
    if count > cap as u128 {
        return Err(CatError::CapExceeded { what: what.into(), count, cap });
    }
    Ok(())
}

/// Standard generators of GL_n: adjacent transvections with prime-basis coefficients
/// and one diagonal matrix.
pub(crate) fn gl_generators(k: Field, n: usize) -> Vec<MatF> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut d = MatF::identity(k, n);
    d[(0, 0)] = k.primitive();
    if d != MatF::identity(k, n) {
        out.push(d);
    }
    for c in k.prime_basis() {
        for i in 0..n.saturating_sub(1) {
            for (r, s) in [(i, i + 1), (i + 1, i)] {
                let mut e = MatF::identity(k, n);
                e[(r, s)] = c;
                out.push(e);
            }
        }
    }
    out
}

/// `x ↦ (x, 0)` from F^n to F^{n+1}.
pub(crate) fn coordinate_inclusion(k: Field, n: usize, m: usize) -> MatF {
    let mut a = MatF::zeros(k, m, n);
    for i in 0..n.min(m) {
        a[(i, i)] = 1;
    }
    a
}

pub fn build_vect_cat(field: Field, dmax: usize, class: VectClass, cap: usize) -> Result<FinCat, CatError> {
    let q = field.q() as u128;
    let total: u128 = (0..=dmax).flat_map(|a| (0..=dmax).map(move |b| q.pow((a * b) as u32))).sum();
    check_cap("matrices", total, cap)?;
    let n = dmax + 1;
    let objects: Vec<Object> = (0..=dmax).map(Object::vect).collect();
    let mut keys = Vec::with_capacity(n * n);
    for a in 0..=dmax {
        for b in 0..=dmax {
            let keep = |m: &MatF| match class {
                VectClass::All => true,
                VectClass::Inj => m.is_injective(),
                VectClass::Surj => m.is_surjective(),
                VectClass::Iso => a == b && m.is_invertible(),
            };
            let allowed = match class {
                VectClass::All => true,
                VectClass::Inj => a <= b,
                VectClass::Surj => a >= b,
                VectClass::Iso => a == b,
            };
            let list: Vec<Vec<u8>> = if allowed {
                MatF::enumerate(field, b, a).filter(keep).map(|m| m.data().to_vec()).collect()
            } else {
                Vec::new()
            };
            keys.push(list);
        }
    }
    let mut gens = Vec::new();
    for d in 0..=dmax {
        for g in gl_generators(field, d) {
            gens.push((d, d, g.data().to_vec()));
        }
        if d < dmax {
            if matches!(class, VectClass::All | VectClass::Inj) {
                gens.push((d, d + 1, coordinate_inclusion(field, d, d + 1).data().to_vec()));
            }
            if matches!(class, VectClass::All | VectClass::Surj) {
                gens.push((d + 1, d, coordinate_inclusion(field, d + 1, d).data().to_vec()));
            }
        }
    }
    FinCat::assemble(CatParts {
        desc: format!("vect/{class:?}/q{}/d{dmax}", field.q()),
        field: Some(field),
        objects,
        rule: Rule::Linear(field),
        keys,
        identity_keys: (0..=dmax).map(|d| MatF::identity(field, d).data().to_vec()).collect(),
        generators: Some(gens),
        mono_pullbacks: class == VectClass::Inj || class == VectClass::Iso,
    })
}

/// All vectors of F_q^n in lexicographic order.
fn all_vectors(k: Field, n: usize) -> Vec<Vec<Elem>> {
    let q = k.q() as u64;
    (0..q.pow(n as u32))
        .map(|mut c| {
            let mut v = vec![0u8; n];
            for s in v.iter_mut().rev() {
                *s = (c % q) as u8;
                c /= q;
            }
            v
        })
        .collect()
}

/// Keys (row-major matrices) of all isometric injections `s → t`, sorted.
fn isometric_injections(s: &QuadSpace, t: &QuadSpace, vectors: &[Vec<Elem>]) -> Vec<Vec<u8>> {
    let k = s.field();
    let (n, m) = (s.dim(), t.dim());
    if n > m {
        return Vec::new();
    }
    let target_values: Vec<Elem> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            s.value(&e)
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        s: &QuadSpace,
        t: &QuadSpace,
        vectors: &[Vec<Elem>],
        values: &[Elem],
        chosen: &mut Vec<usize>,
        ech: &SpEchelon,
        out: &mut Vec<Vec<u8>>,
    ) {
        let j = chosen.len();
        if j == s.dim() {
            let (m, n) = (t.dim(), s.dim());
            let mut key = vec![0u8; m * n];
            for (c, &vi) in chosen.iter().enumerate() {
                for r in 0..m {
                    key[r * n + c] = vectors[vi][r];
                }
            }
            out.push(key);
            return;
        }
        for (vi, v) in vectors.iter().enumerate() {
            if t.value(v) != values[j] {
                continue;
            }
            if chosen.iter().enumerate().any(|(i, &ui)| t.bilinear(&vectors[ui], v) != s.polar()[(i, j)]) {
                continue;
            }
            let sv = SpVec::from_dense(v);
            if ech.contains(&sv) {
                continue;
            }
            let mut e2 = ech.clone();
            e2.insert(&sv);
            chosen.push(vi);
            rec(s, t, vectors, values, chosen, &e2, out);
            chosen.pop();
        }
    }
    rec(s, t, vectors, &target_values, &mut chosen, &SpEchelon::new(k, m), &mut out);
    out.sort();
    out
}

/// Full subcategory of quadratic (or alternating) spaces on the listed forms, with
/// isometric injections as morphisms.
pub fn build_form_cat_on(field: Field, forms: Vec<QuadSpace>, cap: usize) -> Result<FinCat, CatError> {
    let kind = forms.first().map(|f| f.kind()).unwrap_or(FormKind::Quadratic);
    let dmax = forms.iter().map(|f| f.dim()).max().unwrap_or(0);
    let vectors: Vec<Vec<Vec<Elem>>> = (0..=dmax).map(|d| all_vectors(field, d)).collect();
    let n = forms.len();
    let mut keys = Vec::with_capacity(n * n);
    let mut total = 0usize;
    for s in &forms {
        for t in &forms {
            let list = isometric_injections(s, t, &vectors[t.dim()]);
            total += list.len();
            check_cap("isometric injections", total as u128, cap)?;
            keys.push(list);
        }
    }
    let identity_keys = forms.iter().map(|s| MatF::identity(field, s.dim()).data().to_vec()).collect();
    let tag = match kind {
        FormKind::Quadratic => "quad",
        FormKind::Alternating => "alt",
    };
    let mut h = sha2::Sha256::new();
    use sha2::Digest;
    for f in &forms {
        h.update(f.key());
    }
    let digest: [u8; 32] = h.finalize().into();
    FinCat::assemble(CatParts {
        desc: format!("{tag}/q{}/on{}", field.q(), hex8(&digest)),
        field: Some(field),
        objects: forms.into_iter().map(Object::form).collect(),
        rule: Rule::Linear(field),
        keys,
        identity_keys,
        generators: None,
        mono_pullbacks: false,
    })
}

fn hex8(d: &[u8]) -> String {
    d[..4].iter().map(|b| format!("{b:02x}")).collect()
}

fn build_forms(field: Field, kind: FormKind, dmax: usize, allow_degenerate: bool, cap: usize) -> Result<FinCat, CatError> {
    let q = field.q() as u128;
    let count: u128 = (0..=dmax)
        .map(|n| {
            let len = match kind {
                FormKind::Quadratic => n * (n + 1) / 2,
                FormKind::Alternating => n * n.saturating_sub(1) / 2,
            };
            q.pow(len as u32)
        })
        .sum();
    check_cap("forms", count, cap)?;
    let forms: Vec<QuadSpace> = (0..=dmax)
        .flat_map(|n| QuadSpace::enumerate(field, kind, n))
        .filter(|s| allow_degenerate || s.is_nondegenerate())
        .collect();
    let mut c = build_form_cat_on(field, forms, cap)?;
    let tag = match kind {
        FormKind::Quadratic => "quad",
        FormKind::Alternating => "alt",
    };
    let inner = std::sync::Arc::get_mut(&mut c.inner).expect("fresh category");
    inner.desc = format!("{tag}/q{}/d{dmax}/{}", field.q(), if allow_degenerate { "deg" } else { "nondeg" });
    Ok(c)
}

/// All quadratic spaces of dimension ≤ `dmax` (non-skeletal) and isometric injections.
pub fn build_quad_cat(field: Field, dmax: usize, allow_degenerate: bool, cap: usize) -> Result<FinCat, CatError> {
    build_forms(field, FormKind::Quadratic, dmax, allow_degenerate, cap)
}

pub fn build_alt_cat(field: Field, dmax: usize, allow_degenerate: bool, cap: usize) -> Result<FinCat, CatError> {
    build_forms(field, FormKind::Alternating, dmax, allow_degenerate, cap)
}

/// Whether an isometric bijection `s → t` exists.
pub fn isometric(s: &QuadSpace, t: &QuadSpace) -> bool {
    if s.dim() != t.dim() || s.kind() != t.kind() {
        return false;
    }
    if s.field().p() != 2 && s.kind() == FormKind::Quadratic {
        return s.invariants() == t.invariants();
    }
    if s.kind() == FormKind::Alternating {
        return s.polar().rank() == t.polar().rank();
    }
    let vectors = all_vectors(s.field(), t.dim());
    !isometric_injections(s, t, &vectors).is_empty()
}

/// One representative per isometry class of forms of dimension ≤ `dmax`, ordered by
/// dimension and then by coefficient table.
pub fn skeleton_forms(field: Field, kind: FormKind, dmax: usize, allow_degenerate: bool) -> Vec<QuadSpace> {
    let mut reps: Vec<QuadSpace> = Vec::new();
    for n in 0..=dmax {
        let mut here: Vec<QuadSpace> = Vec::new();
        for s in candidate_forms(field, kind, n) {
            if !allow_degenerate && !s.is_nondegenerate() {
                continue;
            }
            if !here.iter().any(|r| isometric(r, &s)) {
                here.push(s);
            }
        }
        reps.extend(here);
    }
    reps
}

/// Forms that together meet every isometry class of dimension `n`: orthogonal sums of
/// hyperbolic planes, up to two diagonal or anisotropic terms, and a zero block.
fn candidate_forms(k: Field, kind: FormKind, n: usize) -> Vec<QuadSpace> {
    let mut out = Vec::new();
    let zero = |d| QuadSpace::zero(k, kind, d);
    for rad in 0..=n {
        let m = n - rad;
        match kind {
            FormKind::Alternating => {
                if m % 2 == 0 {
                    out.push(QuadSpace::hyperbolic_power(k, kind, m / 2).orthogonal_sum(&zero(rad)));
                }
            }
            FormKind::Quadratic => {
                let hp = |c| QuadSpace::hyperbolic_power(k, kind, c);
                let mut tails: Vec<QuadSpace> = Vec::new();
                tails.push(zero(0));
                let nu = nonsquare(k);
                for a in [1u8, nu] {
                    tails.push(QuadSpace::diagonal(k, &[a]));
                    for b in [1u8, nu] {
                        tails.push(QuadSpace::diagonal(k, &[a, b]));
                    }
                }
                if k.p() == 2 {
                    tails.push(anisotropic_plane(k));
                    tails.push(anisotropic_plane(k).orthogonal_sum(&QuadSpace::diagonal(k, &[1])));
                }
                for t in tails {
                    if t.dim() <= m && (m - t.dim()) % 2 == 0 {
                        out.push(hp((m - t.dim()) / 2).orthogonal_sum(&t).orthogonal_sum(&zero(rad)));
                    }
                }
            }
        }
    }
    // the candidates cover every class; fall back to brute force in small cases to be safe
    if n <= 2 {
        out.extend(QuadSpace::enumerate(k, kind, n));
    }
    out
}

fn nonsquare(k: Field) -> Elem {
    if k.p() == 2 {
        return 1;
    }
    k.primitive()
}

/// `x² + xy + c y²` with `t² + t + c` irreducible, for characteristic 2.
fn anisotropic_plane(k: Field) -> QuadSpace {
    let c = k
        .elements()
        .find(|&c| k.elements().all(|t| k.add(k.add(k.mul(t, t), t), c) != 0))
        .expect("an irreducible Artin-Schreier polynomial exists");
    QuadSpace::new(k, FormKind::Quadratic, 2, vec![1, 1, c])
}

fn all_maps(from: usize, to: usize) -> Vec<Vec<u8>> {
    let total = (to as u64).pow(from as u32);
    (0..total)
        .map(|mut c| {
            let mut v = vec![0u8; from];
            for s in v.iter_mut().rev() {
                *s = (c % to as u64) as u8;
                c /= to as u64;
            }
            v
        })
        .collect()
}

pub fn build_set_cat(nmax: usize, kind: SetKind) -> Result<FinCat, CatError> {
    if nmax > 7 {
        return Err(CatError::CapExceeded { what: "set size".into(), count: nmax as u128, cap: 7 });
    }
    let pointed = kind == SetKind::Pointed;
    let objects: Vec<Object> = (0..=nmax).map(|n| Object::set(n, pointed)).collect();
    let mut keys = Vec::new();
    for a in 0..=nmax {
        for b in 0..=nmax {
            let list: Vec<Vec<u8>> = match kind {
                SetKind::Pointed => all_maps(a, b + 1)
                    .into_iter()
                    .map(|m| std::iter::once(0).chain(m).collect())
                    .collect(),
                _ => all_maps(a, b)
                    .into_iter()
                    .filter(|m| {
                        let mut hit = vec![0usize; b];
                        for &x in m {
                            hit[x as usize] += 1;
                        }
                        let inj = hit.iter().all(|&h| h <= 1);
                        let surj = hit.iter().all(|&h| h >= 1);
                        match kind {
                            SetKind::Injections => inj,
                            SetKind::Surjections => surj,
                            _ => inj && surj,
                        }
                    })
                    .collect(),
            };
            keys.push(list);
        }
    }
    let identity_keys = (0..=nmax)
        .map(|n| if pointed { (0..=n as u8).collect() } else { (0..n as u8).collect() })
        .collect();
    FinCat::assemble(CatParts {
        desc: format!("sets/{kind:?}/n{nmax}"),
        field: None,
        objects,
        rule: Rule::SetMaps,
        keys,
        identity_keys,
        generators: None,
        mono_pullbacks: matches!(kind, SetKind::Injections | SetKind::Bijections),
    })
}

/// Pairs `(V, W ⊆ V)` with maps `f` satisfying `f(W) = W'`.
pub fn build_grassmann_cat(field: Field, dmax: usize, cap: usize) -> Result<FinCat, CatError> {
    let q = field.q() as u128;
    let per_dim: Vec<Vec<Subspace>> = (0..=dmax).map(|n| Subspace::enumerate_all(field, n)).collect();
    let count: u128 = (0..=dmax)
        .flat_map(|a| (0..=dmax).map(move |b| (a, b)))
        .map(|(a, b)| q.pow((a * b) as u32) * per_dim[a].len() as u128 * per_dim[b].len() as u128)
        .sum();
    check_cap("grassmann matrix tests", count, cap)?;
    let objects: Vec<Object> =
        per_dim.iter().enumerate().flat_map(|(n, ws)| ws.iter().map(move |w| Object { size: n, data: ObjData::Pair(w.clone()) })).collect();
    let n = objects.len();
    let mut keys = Vec::with_capacity(n * n);
    let mut mats: FxHashMap<(usize, usize), Vec<MatF>> = FxHashMap::default();
    for oa in &objects {
        for ob in &objects {
            let (ObjData::Pair(w), ObjData::Pair(w2)) = (&oa.data, &ob.data) else { unreachable!() };
            if w2.dim() > w.dim() {
                keys.push(Vec::new());
                continue;
            }
            let list = mats
                .entry((oa.size, ob.size))
                .or_insert_with(|| MatF::enumerate(field, ob.size, oa.size).collect())
                .iter()
                .filter(|m| w.image(m).expect("shapes agree") == *w2)
                .map(|m| m.data().to_vec())
                .collect();
            keys.push(list);
        }
    }
    let identity_keys = objects.iter().map(|o| MatF::identity(field, o.size).data().to_vec()).collect();
    FinCat::assemble(CatParts {
        desc: format!("grassmann/q{}/d{dmax}", field.q()),
        field: Some(field),
        objects,
        rule: Rule::Linear(field),
        keys,
        identity_keys,
        generators: None,
        mono_pullbacks: false,
    })
}

/// A category from an explicit composition table over morphisms `0..m`.
/// Morphisms must be grouped so that `(src, tgt)` pairs are contiguous in
/// lexicographic order; `table[g * m + f]` is `g ∘ f` or [`CompTable::NONE`].
pub fn table_cat(
    desc: &str,
    num_objects: usize,
    src: &[ObjId],
    tgt: &[ObjId],
    identities: &[MorId],
    table: Vec<u32>,
) -> Result<FinCat, CatError> {
    let m = src.len();
    let mut keys = vec![Vec::new(); num_objects * num_objects];
    let mut last = (0usize, 0usize);
    for i in 0..m {
        let pair = (src[i], tgt[i]);
        if pair < last {
            return Err(CatError::Invalid("morphisms must be sorted by (source, target)".into()));
        }
        last = pair;
        keys[pair.0 * num_objects + pair.1].push((i as u32).to_le_bytes().to_vec());
    }
    FinCat::assemble(CatParts {
        desc: desc.to_string(),
        field: None,
        objects: (0..num_objects).map(|_| Object { size: 0, data: ObjData::Abstract }).collect(),
        rule: Rule::Table(CompTable::new(m, table)),
        keys,
        identity_keys: identities.iter().map(|&i| (i as u32).to_le_bytes().to_vec()).collect(),
        generators: None,
        mono_pullbacks: false,
    })
}

/// One-object category of a finite monoid; `mul(g, f)` is the product `g · f`.
pub fn monoid_cat(desc: &str, size: usize, unit: usize, mul: impl Fn(usize, usize) -> usize) -> Result<FinCat, CatError> {
    let mut table = Vec::with_capacity(size * size);
    for g in 0..size {
        for f in 0..size {
            table.push(mul(g, f) as u32);
        }
    }
    table_cat(desc, 1, &vec![0; size], &vec![0; size], &[unit], table)
}

/// The poset `0..n` with `i → j` iff `leq[i][j]`.
pub fn poset_cat(leq: &[Vec<bool>]) -> Result<FinCat, CatError> {
    let n = leq.len();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut id = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            if leq[i][j] {
                id[i * n + j] = src.len();
                src.push(i);
                tgt.push(j);
            }
        }
    }
    let m = src.len();
    let mut table = vec![CompTable::NONE; m * m];
    for g in 0..m {
        for f in 0..m {
            if tgt[f] == src[g] {
                if !leq[src[f]][tgt[g]] {
                    return Err(CatError::Invalid("relation is not transitive".into()));
                }
                table[g * m + f] = id[src[f] * n + tgt[g]] as u32;
            }
        }
    }
    let idents: Vec<MorId> = (0..n).map(|i| id[i * n + i]).collect();
    table_cat(&format!("poset/{n}"), n, &src, &tgt, &idents, table)
}

/// `C × D` with objects `(a, b)` ordered by `a` first.
pub fn product_cat(c: &FinCat, d: &FinCat) -> Result<FinCat, CatError> {
    let (nc, nd) = (c.num_objects(), d.num_objects());
    let objects: Vec<Object> = (0..nc)
        .flat_map(|a| (0..nd).map(move |b| Object { size: 0, data: ObjData::Tuple(a, b) }))
        .collect();
    let n = objects.len();
    let total: u128 = (0..nc)
        .flat_map(|a| (0..nc).map(move |a2| (a, a2)))
        .map(|(a, a2)| c.hom(a, a2).len() as u128)
        .sum::<u128>()
        * (0..nd).flat_map(|b| (0..nd).map(move |b2| (b, b2))).map(|(b, b2)| d.hom(b, b2).len() as u128).sum::<u128>();
    check_cap("product morphisms", total, super::DEFAULT_MORPHISM_CAP)?;
    let pair_key = |f: MorId, g: MorId| {
        let mut k = (f as u32).to_le_bytes().to_vec();
        k.extend((g as u32).to_le_bytes());
        k
    };
    let mut keys = Vec::with_capacity(n * n);
    for s in 0..n {
        for t in 0..n {
            let (a, b) = (s / nd, s % nd);
            let (a2, b2) = (t / nd, t % nd);
            let mut list = Vec::new();
            for f in c.hom(a, a2) {
                for g in d.hom(b, b2) {
                    list.push(pair_key(f, g));
                }
            }
            keys.push(list);
        }
    }
    let identity_keys = (0..n).map(|s| pair_key(c.identity(s / nd), d.identity(s % nd))).collect();
    let mut gens = Vec::new();
    for &f in c.generators() {
        for b in 0..nd {
            gens.push((c.src(f) * nd + b, c.tgt(f) * nd + b, pair_key(f, d.identity(b))));
        }
    }
    for &g in d.generators() {
        for a in 0..nc {
            gens.push((a * nd + d.src(g), a * nd + d.tgt(g), pair_key(c.identity(a), g)));
        }
    }
    FinCat::assemble(CatParts {
        desc: format!("({}{})x({}{})", c.description(), if c.is_opposite() { "^op" } else { "" }, d.description(), if d.is_opposite() { "^op" } else { "" }),
        field: c.field().or(d.field()),
        objects,
        rule: Rule::Product(c.clone(), d.clone()),
        keys,
        identity_keys,
        generators: Some(gens),
        mono_pullbacks: false,
    })
}

/// A set-valued functor on a finite category.
#[derive(Clone, Debug)]
pub struct SetRep {
    pub cat: FinCat,
    pub contravariant: bool,
    pub sizes: Vec<usize>,
    /// `maps[m][y]`: image of point `y` under `X(m)`.
    pub maps: Vec<Vec<u32>>,
}

impl SetRep {
    pub fn validate(&self) -> Result<(), CatError> {
        let c = &self.cat;
        for a in 0..c.num_objects() {
            let id = &self.maps[c.identity(a)];
            if id.iter().enumerate().any(|(i, &x)| i as u32 != x) {
                return Err(CatError::Functor(format!("set functor moves points under the identity of {a}")));
            }
        }
        for f in c.morphisms() {
            for &g in c.generators() {
                if c.src(g) != c.tgt(f) {
                    continue;
                }
                let h = c.compose(g, f);
                let ok = (0..self.maps[h].len()).all(|y| {
                    let composed = if self.contravariant {
                        self.maps[f][self.maps[g][y] as usize]
                    } else {
                        self.maps[g][self.maps[f][y] as usize]
                    };
                    composed == self.maps[h][y]
                });
                if !ok {
                    return Err(CatError::Functor(format!("set functor fails on ({g}, {f})")));
                }
            }
        }
        Ok(())
    }
}

/// Category of elements: objects `(i, x ∈ X(i))`; for contravariant `X` the
/// morphisms `(i, X(f)y) → (j, y)` are the `f : i → j`.
pub fn elements_cat(x: &SetRep) -> Result<FinCat, CatError> {
    let c = &x.cat;
    let mut objects = Vec::new();
    let mut first = Vec::with_capacity(c.num_objects());
    for i in 0..c.num_objects() {
        first.push(objects.len());
        for p in 0..x.sizes[i] {
            objects.push(Object { size: c.object(i).size, data: ObjData::Element { base: i, x: p as u32 } });
        }
    }
    let n = objects.len();
    let mut keys = vec![Vec::new(); n * n];
    for f in c.morphisms() {
        let (i, j) = (c.src(f), c.tgt(f));
        if x.contravariant {
            for y in 0..x.sizes[j] {
                let s = first[i] + x.maps[f][y] as usize;
                keys[s * n + first[j] + y].push((f as u32).to_le_bytes().to_vec());
            }
        } else {
            for p in 0..x.sizes[i] {
                let t = first[j] + x.maps[f][p] as usize;
                keys[(first[i] + p) * n + t].push((f as u32).to_le_bytes().to_vec());
            }
        }
    }
    let identity_keys: Vec<Vec<u8>> = objects
        .iter()
        .map(|o| match o.data {
            ObjData::Element { base, .. } => (c.identity(base) as u32).to_le_bytes().to_vec(),
            _ => unreachable!(),
        })
        .collect();
    let mut gens = Vec::new();
    for &g in c.generators() {
        let (i, j) = (c.src(g), c.tgt(g));
        let k = (g as u32).to_le_bytes().to_vec();
        if x.contravariant {
            for y in 0..x.sizes[j] {
                gens.push((first[i] + x.maps[g][y] as usize, first[j] + y, k.clone()));
            }
        } else {
            for p in 0..x.sizes[i] {
                gens.push((first[i] + p, first[j] + x.maps[g][p] as usize, k.clone()));
            }
        }
    }
    FinCat::assemble(CatParts {
        desc: format!("elements({})", c.description()),
        field: c.field(),
        objects,
        rule: Rule::Elements(c.clone()),
        keys,
        identity_keys,
        generators: Some(gens),
        mono_pullbacks: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::DEFAULT_MORPHISM_CAP as CAP;

    fn gl_order(q: u64, n: u32) -> u64 {
        (0..n).map(|i| q.pow(n) - q.pow(i)).product()
    }

    #[test]
    fn vect_hom_counts() {
        let inj = build_vect_cat(Field::of(2), 2, VectClass::Inj, CAP).unwrap();
        assert_eq!(inj.hom(1, 2).len(), 3);
        let all = build_vect_cat(Field::of(3), 1, VectClass::All, CAP).unwrap();
        assert_eq!(all.hom(1, 1).len(), 3);
        assert!(all.is_identity(all.identity(1)));
        assert_eq!(all.hom(1, 1).filter(|&m| all.is_identity(m)).count(), 1);
        let iso = build_vect_cat(Field::of(2), 2, VectClass::Iso, CAP).unwrap();
        assert_eq!(iso.hom(2, 2).len(), 6);
        let surj = build_vect_cat(Field::of(2), 2, VectClass::Surj, CAP).unwrap();
        assert_eq!(surj.hom(2, 1).len(), 3);
        assert!(surj.hom(1, 2).is_empty());
    }

    #[test]
    fn preset_generators_generate() {
        for q in [2u32, 3, 4] {
            let k = Field::of(q);
            for class in [VectClass::All, VectClass::Inj, VectClass::Surj, VectClass::Iso] {
                let c = build_vect_cat(k, 2, class, CAP).unwrap();
                assert_eq!(c.closure_size(c.generators()), c.num_morphisms(), "q={q} {class:?}");
            }
        }
        let c = build_vect_cat(Field::of(2), 3, VectClass::Iso, CAP).unwrap();
        assert_eq!(c.hom(3, 3).len() as u64, gl_order(2, 3));
        assert_eq!(c.closure_size(c.generators()), c.num_morphisms());
    }

    #[test]
    fn vect_categories_validate() {
        let c = build_vect_cat(Field::of(2), 2, VectClass::All, CAP).unwrap();
        assert!(c.validate(1 << 22).unwrap().exhaustive);
        let c = build_vect_cat(Field::of(4), 2, VectClass::Inj, CAP).unwrap();
        c.validate(1 << 22).unwrap();
    }

    #[test]
    fn quad_category_counts() {
        let k = Field::of(3);
        let c = build_quad_cat(k, 2, true, CAP).unwrap();
        assert_eq!(c.objects().iter().filter(|o| o.size == 2).count(), 27);
        let h = c.find_object(&Object::form(QuadSpace::hyperbolic(k, FormKind::Quadratic))).unwrap();
        assert_eq!(c.hom(h, h).len(), 4);
        for b in 0..c.num_objects() {
            assert_eq!(c.hom(0, b).len(), 1);
        }
        c.validate(1 << 22).unwrap();
    }

    #[test]
    fn nondegenerate_is_full_subcategory() {
        let k = Field::of(3);
        let deg = build_quad_cat(k, 2, true, CAP).unwrap();
        let nd = build_quad_cat(k, 2, false, CAP).unwrap();
        for a in 0..nd.num_objects() {
            for b in 0..nd.num_objects() {
                let da = deg.find_object(nd.object(a)).unwrap();
                let db = deg.find_object(nd.object(b)).unwrap();
                let x: Vec<&[u8]> = nd.hom(a, b).map(|m| nd.key(m)).collect();
                let y: Vec<&[u8]> = deg.hom(da, db).map(|m| deg.key(m)).collect();
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn preimage_of_radical_lies_in_radical() {
        let k = Field::of(3);
        let c = build_quad_cat(k, 2, true, CAP).unwrap();
        for m in c.morphisms() {
            let (ObjData::Form(s), ObjData::Form(t)) = (&c.object(c.src(m)).data, &c.object(c.tgt(m)).data) else {
                unreachable!()
            };
            let pre = Subspace::preimage(&c.matrix(m).unwrap(), &t.radical()).unwrap();
            assert!(s.radical().contains_subspace(&pre));
        }
    }

    #[test]
    fn symplectic_counts() {
        let c = build_alt_cat(Field::of(3), 2, true, CAP).unwrap();
        let h = c.find_object(&Object::form(QuadSpace::hyperbolic(Field::of(3), FormKind::Alternating))).unwrap();
        assert_eq!(c.hom(h, h).len(), 24);
        let nd = build_alt_cat(Field::of(3), 2, false, CAP).unwrap();
        assert!(nd.objects().iter().all(|o| o.size != 1));
        let c2 = build_alt_cat(Field::of(2), 2, false, CAP).unwrap();
        let h2 = c2.find_object(&Object::form(QuadSpace::hyperbolic(Field::of(2), FormKind::Alternating))).unwrap();
        assert_eq!(c2.hom(h2, h2).len(), 6);
    }

    #[test]
    fn set_category_counts() {
        let theta = build_set_cat(3, SetKind::Injections).unwrap();
        assert_eq!(theta.hom(2, 3).len(), 6);
        let gamma = build_set_cat(2, SetKind::Pointed).unwrap();
        assert_eq!(gamma.hom(2, 2).len(), 9);
        let omega = build_set_cat(3, SetKind::Surjections).unwrap();
        assert!(omega.hom(1, 2).is_empty());
        assert_eq!(omega.hom(3, 2).len(), 6);
        for c in [theta, gamma, omega, build_set_cat(3, SetKind::Bijections).unwrap()] {
            c.validate(1 << 20).unwrap();
        }
    }

    #[test]
    fn grassmann_objects_and_kernels() {
        let k = Field::of(2);
        let c = build_grassmann_cat(k, 2, CAP).unwrap();
        assert_eq!(c.num_objects(), 8);
        for a in 0..c.num_objects() {
            let o = c.object(a);
            if let ObjData::Pair(w) = &o.data {
                if w.is_zero() {
                    assert!(c.hom(a, a).contains(&c.identity(a)));
                }
            }
        }
        // f(W) = 0 forces W ⊆ ker f
        for m in c.morphisms() {
            let (ObjData::Pair(w), ObjData::Pair(w2)) = (&c.object(c.src(m)).data, &c.object(c.tgt(m)).data) else {
                unreachable!()
            };
            if w2.is_zero() {
                assert!(Subspace::kernel(&c.matrix(m).unwrap()).contains_subspace(w));
            }
        }
        c.validate(1 << 22).unwrap();
    }

    #[test]
    fn skeleton_counts_odd_characteristic() {
        let k = Field::of(3);
        let reps = skeleton_forms(k, FormKind::Quadratic, 2, true);
        // dim 0: 1; dim 1: 0, <1>, <2>; dim 2: 5 classes by (rad, disc)
        assert_eq!(reps.len(), 1 + 3 + 5);
        let nd = skeleton_forms(k, FormKind::Quadratic, 4, false);
        assert_eq!(nd.len(), 1 + 2 + 2 + 2 + 2);
        let alt = skeleton_forms(k, FormKind::Alternating, 4, false);
        assert_eq!(alt.len(), 3);
    }

    #[test]
    fn skeleton_counts_characteristic_two() {
        let k = Field::of(2);
        // nondegenerate: 0, <1>, H, anisotropic plane, H⊥<1>, A⊥<1> ≅ H⊥<1>
        let nd = skeleton_forms(k, FormKind::Quadratic, 3, false);
        assert_eq!(nd.iter().filter(|s| s.dim() == 2).count(), 2);
        assert_eq!(nd.iter().filter(|s| s.dim() == 3).count(), 1);
    }

    #[test]
    fn product_and_elements() {
        let c = build_set_cat(2, SetKind::Injections).unwrap();
        let p = product_cat(&c.opposite(), &c).unwrap();
        assert_eq!(p.num_morphisms(), c.num_morphisms() * c.num_morphisms());
        p.validate(1 << 20).unwrap();
        assert_eq!(p.closure_size(p.generators()), p.num_morphisms());
        // X(n) = points of n, contravariant? use covariant inclusion action
        let x = SetRep {
            cat: c.clone(),
            contravariant: false,
            sizes: (0..3).collect(),
            maps: c.morphisms().map(|m| c.set_map(m).unwrap().iter().map(|&v| v as u32).collect()).collect(),
        };
        x.validate().unwrap();
        let e = elements_cat(&x).unwrap();
        assert_eq!(e.num_objects(), 3);
        e.validate(1 << 20).unwrap();
        assert_eq!(e.closure_size(e.generators()), e.num_morphisms());
    }

    #[test]
    fn poset_category() {
        let leq: Vec<Vec<bool>> = (0..3).map(|i| (0..3).map(|j| i <= j).collect()).collect();
        let p = poset_cat(&leq).unwrap();
        assert_eq!(p.num_morphisms(), 6);
        p.validate(1000).unwrap();
        assert_eq!(p.closure_size(p.generators()), 6);
    }
}
