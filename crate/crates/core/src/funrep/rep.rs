use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{FunRepError, Variance};
use crate::exactla::{Field, LinMap, SpMat, SpVec};
use crate::fincat::{FinCat, MonFunctor, MorId, ObjId};

type ActionFn = dyn Fn(MorId) -> LinMap + Send + Sync;

#[derive(Clone)]
enum Action {
    Explicit(Arc<Vec<LinMap>>),
    Computed { eval: Arc<ActionFn>, cache: Arc<Vec<OnceLock<LinMap>>> },
}

/// A linear functor from a finite category to finite-dimensional vector spaces.
///
/// For a contravariant representation the map attached to `m : a → b` goes from
/// `F(b)` to `F(a)`.
#[derive(Clone)]
pub struct LinRep {
    cat: FinCat,
    field: Field,
    variance: Variance,
    dims: Arc<Vec<usize>>,
    action: Action,
    label: Option<Arc<str>>,
}

impl fmt::Debug for LinRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinRep")
            .field("cat", &self.cat.description())
            .field("variance", &self.variance)
            .field("dims", &self.dims)
            .field("label", &self.label)
            .finish()
    }
}

impl LinRep {
    pub fn from_maps(
        cat: FinCat,
        field: Field,
        variance: Variance,
        dims: Vec<usize>,
        maps: Vec<LinMap>,
    ) -> Result<LinRep, FunRepError> {
        if dims.len() != cat.num_objects() || maps.len() != cat.num_morphisms() {
            return Err(FunRepError::Shape("dims or maps do not match the category".into()));
        }
        let rep = LinRep { cat, field, variance, dims: Arc::new(dims), action: Action::Explicit(Arc::new(maps)), label: None };
        for m in rep.cat.morphisms() {
            rep.check_shape(m)?;
        }
        Ok(rep)
    }

    /// Lazily evaluated action; each morphism is computed at most once.
    pub fn from_fn(
        cat: FinCat,
        field: Field,
        variance: Variance,
        dims: Vec<usize>,
        eval: impl Fn(MorId) -> LinMap + Send + Sync + 'static,
    ) -> LinRep {
        let cache = Arc::new((0..cat.num_morphisms()).map(|_| OnceLock::new()).collect());
        LinRep { cat, field, variance, dims: Arc::new(dims), action: Action::Computed { eval: Arc::new(eval), cache }, label: None }
    }

    /// Names the representation; the label participates in the fingerprint.
    pub fn with_label(mut self, label: impl Into<String>) -> LinRep {
        self.label = Some(Arc::from(label.into()));
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn constant(cat: &FinCat, field: Field, variance: Variance, n: usize) -> LinRep {
        let id = LinMap::identity(field, n);
        LinRep::from_fn(cat.clone(), field, variance, vec![n; cat.num_objects()], move |_| id.clone())
            .with_label(format!("Const({n})"))
    }

    pub fn zero(cat: &FinCat, field: Field, variance: Variance) -> LinRep {
        LinRep::constant(cat, field, variance, 0).with_label("0")
    }

    /// `k[Hom(c, −)]`, basis in hom-set order.
    pub fn projective(cat: &FinCat, field: Field, c: ObjId) -> LinRep {
        let dims = (0..cat.num_objects()).map(|b| cat.hom(c, b).len()).collect();
        let cat2 = cat.clone();
        LinRep::from_fn(cat.clone(), field, Variance::Covariant, dims, move |m| {
            let (a, b) = (cat2.src(m), cat2.tgt(m));
            let cols = cat2.hom(c, a).map(|h| SpVec::unit(cat2.local_index(cat2.compose(m, h)) as u32)).collect();
            LinMap { field, rows: cat2.hom(c, b).len(), cols }
        })
        .with_label(format!("P{c}"))
    }

    /// `k[Hom(−, c)]`.
    pub fn projective_contra(cat: &FinCat, field: Field, c: ObjId) -> LinRep {
        let dims = (0..cat.num_objects()).map(|a| cat.hom(a, c).len()).collect();
        let cat2 = cat.clone();
        LinRep::from_fn(cat.clone(), field, Variance::Contravariant, dims, move |m| {
            let (a, b) = (cat2.src(m), cat2.tgt(m));
            let cols = cat2.hom(b, c).map(|h| SpVec::unit(cat2.local_index(cat2.compose(h, m)) as u32)).collect();
            LinMap { field, rows: cat2.hom(a, c).len(), cols }
        })
        .with_label(format!("Pop{c}"))
    }

    pub fn cat(&self) -> &FinCat {
        &self.cat
    }
    pub fn field(&self) -> Field {
        self.field
    }
    pub fn variance(&self) -> Variance {
        self.variance
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim(&self, a: ObjId) -> usize {
        self.dims[a]
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Object whose value is the domain of `action(m)`.
    pub fn domain(&self, m: MorId) -> ObjId {
        match self.variance {
            Variance::Covariant => self.cat.src(m),
            Variance::Contravariant => self.cat.tgt(m),
        }
    }

    pub fn codomain(&self, m: MorId) -> ObjId {
        match self.variance {
            Variance::Covariant => self.cat.tgt(m),
            Variance::Contravariant => self.cat.src(m),
        }
    }

    pub fn action(&self, m: MorId) -> &LinMap {
        match &self.action {
            Action::Explicit(maps) => &maps[m],
            Action::Computed { eval, cache } => cache[m].get_or_init(|| eval(m)),
        }
    }

    fn check_shape(&self, m: MorId) -> Result<(), FunRepError> {
        let a = self.action(m);
        if a.ncols() != self.dims[self.domain(m)] || a.rows != self.dims[self.codomain(m)] {
            return Err(FunRepError::Shape(format!(
                "morphism {m}: map is {}x{}, expected {}x{}",
                a.rows,
                a.ncols(),
                self.dims[self.codomain(m)],
                self.dims[self.domain(m)]
            )));
        }
        Ok(())
    }

    /// Shapes, identities, and `F(g∘m) = F(g)F(m)` for generators `g` and all `m`.
    pub fn validate(&self) -> Result<(), FunRepError> {
        let c = &self.cat;
        for m in c.morphisms() {
            self.check_shape(m)?;
        }
        for a in 0..c.num_objects() {
            if !self.action(c.identity(a)).is_identity() {
                return Err(FunRepError::NotFunctorial(format!("identity of object {a} acts nontrivially")));
            }
        }
        let mut from: Vec<Vec<MorId>> = vec![Vec::new(); c.num_objects()];
        for &g in c.generators() {
            from[c.src(g)].push(g);
        }
        for m in c.morphisms() {
            for &g in &from[c.tgt(m)] {
                let lhs = self.action(c.compose(g, m));
                let rhs = match self.variance {
                    Variance::Covariant => self.action(g).compose(self.action(m)),
                    Variance::Contravariant => self.action(m).compose(self.action(g)),
                };
                if *lhs != rhs {
                    return Err(FunRepError::NotFunctorial(format!("composition fails at ({g}, {m})")));
                }
            }
        }
        Ok(())
    }

    /// Evaluates every morphism so later reads are lock-free lookups.
    pub fn materialize(&self) -> LinRep {
        let maps = self.cat.morphisms().map(|m| self.action(m).clone()).collect();
        LinRep { action: Action::Explicit(Arc::new(maps)), ..self.clone() }
    }

    /// `V ↦ F(V)*`, opposite variance, transposed maps.
    pub fn pointwise_dual(&self) -> LinRep {
        let me = self.clone();
        let mut r = LinRep::from_fn(self.cat.clone(), self.field, self.variance.flip(), self.dims.to_vec(), move |m| {
            me.action(m).transpose()
        });
        r.label = self.label.as_ref().map(|l| Arc::from(format!("dual({l})")));
        r
    }

    fn same_base(&self, other: &LinRep) -> Result<(), FunRepError> {
        if self.cat.content_hash() != other.cat.content_hash() || self.cat.is_opposite() != other.cat.is_opposite() {
            return Err(FunRepError::CategoryMismatch);
        }
        if self.variance != other.variance {
            return Err(FunRepError::Variance("operands have different variance".into()));
        }
        Ok(())
    }

    pub fn tensor(&self, other: &LinRep) -> Result<LinRep, FunRepError> {
        self.same_base(other)?;
        let dims = self.dims.iter().zip(other.dims.iter()).map(|(a, b)| a * b).collect();
        let (x, y) = (self.clone(), other.clone());
        let mut r = LinRep::from_fn(self.cat.clone(), self.field, self.variance, dims, move |m| {
            x.action(m).kron(y.action(m))
        });
        r.label = join_labels(self, other, "(x)");
        Ok(r)
    }

    pub fn direct_sum(&self, other: &LinRep) -> Result<LinRep, FunRepError> {
        self.same_base(other)?;
        let dims = self.dims.iter().zip(other.dims.iter()).map(|(a, b)| a + b).collect();
        let (x, y) = (self.clone(), other.clone());
        let mut r = LinRep::from_fn(self.cat.clone(), self.field, self.variance, dims, move |m| {
            x.action(m).direct_sum(y.action(m))
        });
        r.label = join_labels(self, other, "(+)");
        Ok(r)
    }

    /// Precomposition `Q^*F` along `Q : D → C`.
    pub fn restrict(&self, q: &MonFunctor) -> Result<LinRep, FunRepError> {
        if q.target().content_hash() != self.cat.content_hash() || q.target().is_opposite() != self.cat.is_opposite() {
            return Err(FunRepError::CategoryMismatch);
        }
        let dims = q.obj_map().iter().map(|&a| self.dims[a]).collect();
        let (me, qm) = (self.clone(), q.clone());
        let mut r =
            LinRep::from_fn(q.source().clone(), self.field, self.variance, dims, move |m| me.action(qm.on_morphism(m)).clone());
        r.label = self.label.as_ref().map(|l| Arc::from(format!("restrict({l})")));
        Ok(r)
    }

    /// The same functor seen as covariant on the opposite category (or back).
    pub fn on_opposite(&self) -> LinRep {
        LinRep { cat: self.cat.opposite(), variance: self.variance.flip(), ..self.clone() }
    }

    /// Digest of the category, variance, dims and either the label or every map.
    pub fn fingerprint(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(self.cat.content_hash());
        h.update([self.cat.is_opposite() as u8, self.variance as u8]);
        h.update((self.field.q()).to_le_bytes());
        for &d in self.dims.iter() {
            h.update((d as u64).to_le_bytes());
        }
        match &self.label {
            Some(l) => h.update(l.as_bytes()),
            None => {
                for m in self.cat.morphisms() {
                    for c in &self.action(m).cols {
                        for &(i, x) in c.entries() {
                            h.update(i.to_le_bytes());
                            h.update([x]);
                        }
                        h.update([0xff]);
                    }
                }
            }
        }
        h.finalize().into()
    }

    /// Dims and sparse matrices for serialization.
    pub fn to_record(&self) -> RepRecord {
        RepRecord {
            variance: self.variance,
            dims: self.dims.to_vec(),
            maps: self
                .cat
                .morphisms()
                .map(|m| self.action(m).cols.iter().map(|c| c.entries().to_vec()).collect())
                .collect(),
        }
    }
}

/// Dimension of the space of natural transformations `F → G`; the naturality
/// constraints at generators already force them at every morphism.
pub fn hom_dim(f: &LinRep, g: &LinRep) -> Result<usize, FunRepError> {
    f.same_base(g)?;
    let c = f.cat();
    let k = f.field;
    let mut offset = vec![0usize; c.num_objects() + 1];
    for a in 0..c.num_objects() {
        offset[a + 1] = offset[a] + g.dim(a) * f.dim(a);
    }
    // unknown (a, r, s) is entry (r, s) of η_a : F(a) → G(a)
    let var = |a: usize, r: usize, s: usize| (offset[a] + r * f.dim(a) + s) as u32;
    let mut sys = SpMat::new(k, offset[c.num_objects()]);
    for &m in c.generators() {
        let (a, b) = (f.domain(m), f.codomain(m));
        let (fm, gm) = (f.action(m), g.action(m));
        // G(m) η_a = η_b F(m), entrywise on G(b) × F(a)
        let gt = gm.transpose();
        for r in 0..g.dim(b) {
            for s in 0..f.dim(a) {
                let mut pairs = Vec::new();
                for &(i, x) in gt.cols[r].entries() {
                    pairs.push((var(a, i as usize, s), x));
                }
                for &(j, y) in fm.cols[s].entries() {
                    pairs.push((var(b, r, j as usize), k.neg(y)));
                }
                let row = SpVec::from_pairs(k, pairs);
                if !row.is_zero() {
                    sys.push_row(row);
                }
            }
        }
    }
    Ok(offset[c.num_objects()] - sys.rank())
}

fn join_labels(a: &LinRep, b: &LinRep, op: &str) -> Option<Arc<str>> {
    Some(Arc::from(format!("({}) {op} ({})", a.label.as_deref()?, b.label.as_deref()?)))
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct RepRecord {
    pub variance: Variance,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<(u32, u8)>>>,
}
