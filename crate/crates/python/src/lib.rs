//! Python bindings. Structured results cross the boundary as canonical JSON
//! strings; `json.loads` turns them into dicts.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use so3_core::cli::InvariantsReport;
use so3_core::constructors::{self, CircleBundleSpec, ThreeManifoldHomology, DEFAULT_SEARCH_BOUND};
use so3_core::decide::{self, Criterion};
use so3_core::fgab::{FgAbGroup, GroupElement};
use so3_core::json::{parse_document, profile_to_json, to_canonical_json, Document};
use so3_core::topology::{F2Vector, ManifoldProfile};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A closed oriented 5-manifold profile.
#[pyclass(frozen, from_py_object, module = "so3py")]
#[derive(Clone)]
pub struct Profile {
    inner: ManifoldProfile,
}

#[pymethods]
impl Profile {
    /// Parses a profile or a construction recipe.
    #[staticmethod]
    #[pyo3(signature = (text, bound = DEFAULT_SEARCH_BOUND))]
    fn from_json(text: &str, bound: u32) -> PyResult<Self> {
        let inner = match parse_document(text).map_err(err)? {
            Document::Profile(p) => *p,
            Document::Recipe(r) => r.build(bound).map_err(err)?,
        };
        Ok(Self { inner })
    }

    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: constructors::catalog(name).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        profile_to_json(&self.inner)
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn homology(&self) -> Vec<String> {
        self.inner.homology.iter().map(|g| g.to_string()).collect()
    }

    #[getter]
    fn spin(&self) -> bool {
        self.inner.spin
    }

    #[getter]
    fn w4_zero(&self) -> bool {
        self.inner.w4_zero
    }

    fn semicharacteristic(&self) -> u8 {
        self.inner.semicharacteristic()
    }

    fn kervaire_semicharacteristic(&self) -> u8 {
        self.inner.kervaire_semicharacteristic()
    }

    fn invariants(&self) -> String {
        to_canonical_json(&InvariantsReport::of(&self.inner))
    }

    fn decide_irreducible_so3(&self) -> PyResult<String> {
        let d = decide::decide_irreducible_so3(&self.inner).map_err(err)?;
        Ok(to_canonical_json(&d))
    }

    /// `criterion` is `"thomas"` or `"atiyah"`.
    fn decide_two_field(&self, criterion: &str) -> PyResult<String> {
        let c: Criterion = criterion.parse().map_err(err)?;
        let d = decide::decide_two_field(&self.inner, c).map_err(err)?;
        Ok(to_canonical_json(&d))
    }

    fn decide_standard_so3(&self) -> PyResult<String> {
        let d = decide::decide_standard_so3(&self.inner).map_err(err)?;
        Ok(to_canonical_json(&d))
    }

    /// `w2` as 0/1 entries in the fragment basis, `p1` as coordinates in
    /// `H⁴(M;ℤ)`, free part first.
    fn rank3_bundle_exists(&self, w2: Vec<u8>, p1: Vec<i64>) -> PyResult<String> {
        let w = F2Vector::from_bits(&w2.iter().map(|&b| b % 2 == 1).collect::<Vec<_>>());
        let p = GroupElement::from_i64(self.inner.h4(), &p1).map_err(err)?;
        let d = decide::rank3_bundle_exists(&self.inner, &w, &p).map_err(err)?;
        Ok(to_canonical_json(&d))
    }

    fn __repr__(&self) -> String {
        format!("Profile({:?}, homology={:?})", self.inner.name, self.homology())
    }

    fn __eq__(&self, other: &Profile) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    constructors::CATALOG_NAMES.to_vec()
}

/// Numerical data of the degree-`d` surface in CP³.
#[pyfunction]
fn hypersurface(d: u32) -> PyResult<(usize, i64, i64, i64, bool)> {
    let x = constructors::hypersurface(d).map_err(err)?;
    Ok((x.b2, x.euler_char, x.signature, x.p1_eval, x.spin))
}

/// Circle bundle over the degree-`d` surface with the given Euler class.
#[pyfunction]
fn circle_bundle(d: u32, euler_class: Vec<i64>) -> PyResult<Profile> {
    let base = constructors::hypersurface(d).map_err(err)?;
    let spec = CircleBundleSpec {
        base,
        euler_class: euler_class.into_iter().map(BigInt::from).collect(),
    };
    Ok(Profile {
        inner: constructors::circle_bundle(&spec).map_err(err)?,
    })
}

/// First Euler class in the search box, as `(c, w)`, or `None`.
#[pyfunction]
#[pyo3(signature = (d, u, torsion, bound = DEFAULT_SEARCH_BOUND))]
fn find_euler_class(d: u32, u: Vec<i64>, torsion: u64, bound: u32) -> PyResult<Option<(Vec<i64>, Vec<i64>)>> {
    let base = constructors::hypersurface(d).map_err(err)?;
    let hit = constructors::find_euler_class(&base, &u, torsion, bound).map_err(err)?;
    Ok(hit.map(|w| (w.c, w.w)))
}

#[pyfunction]
fn connected_sum(parts: Vec<Profile>) -> PyResult<Profile> {
    let parts: Vec<ManifoldProfile> = parts.into_iter().map(|p| p.inner).collect();
    Ok(Profile {
        inner: constructors::connected_sum_all(&parts).map_err(err)?,
    })
}

/// `N³ × Σ_g` where `H₁(N) = ℤ^free ⊕ ⊕ ℤ_t`.
#[pyfunction]
fn product_3x2(free: usize, torsion: Vec<u64>, genus: usize) -> PyResult<Profile> {
    if torsion.contains(&0) {
        return Err(PyValueError::new_err("torsion orders must be positive"));
    }
    let h1 = FgAbGroup::from_cyclic_orders(free, torsion.into_iter().map(BigInt::from));
    Ok(Profile {
        inner: constructors::product_3x2(&ThreeManifoldHomology::from_h1(h1), genus).map_err(err)?,
    })
}

#[pymodule]
fn so3py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Profile>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(hypersurface, m)?)?;
    m.add_function(wrap_pyfunction!(circle_bundle, m)?)?;
    m.add_function(wrap_pyfunction!(find_euler_class, m)?)?;
    m.add_function(wrap_pyfunction!(connected_sum, m)?)?;
    m.add_function(wrap_pyfunction!(product_3x2, m)?)?;
    Ok(())
}
