use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

use segre::ovals::{self, EnumerateOptions, EnumerationMode};
use segre::segre::{
    degree_bound_check as bound_check, identity_report as report_for, segre_reconstruct as reconstruct,
};
use segre::{plane, poly, AffineFunction, Conic, Field, FieldCtx, FieldElement, Oval, Polynomial, ProjPoint};

type Triple = (u32, u32, u32);

fn err(e: segre::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(q: u64) -> PyResult<Field> {
    FieldCtx::new(q).map_err(err)
}

fn elem(ctx: &FieldCtx, code: u32) -> PyResult<FieldElement> {
    ctx.element(code).map_err(err)
}

fn point(ctx: &FieldCtx, (x, y, z): Triple) -> PyResult<ProjPoint> {
    ProjPoint::from_codes(ctx, [x, y, z]).map_err(err)
}

fn triple(codes: [u32; 3]) -> Triple {
    (codes[0], codes[1], codes[2])
}

fn polynomial(ctx: &Field, coeffs: &[u32]) -> PyResult<Polynomial> {
    Polynomial::from_codes(ctx, coeffs).map_err(err)
}

fn json_to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// GF(q) with integer-coded elements.
#[pyclass(name = "Field", frozen)]
struct PyField {
    inner: Field,
}

#[pymethods]
impl PyField {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        Ok(PyField { inner: field(q)? })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    fn elements(&self) -> Vec<u32> {
        self.inner.elements().map(FieldElement::code).collect()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.add(elem(f, a)?, elem(f, b)?).code())
    }

    fn sub(&self, a: u32, b: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.sub(elem(f, a)?, elem(f, b)?).code())
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.mul(elem(f, a)?, elem(f, b)?).code())
    }

    fn neg(&self, a: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.neg(elem(f, a)?).code())
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.inv(elem(f, a)?).map_err(err)?.code())
    }

    fn pow(&self, a: u32, e: u64) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.pow(elem(f, a)?, e).code())
    }

    fn power_sum(&self, i: u64) -> u32 {
        self.inner.power_sum(i).code()
    }

    fn nonzero_product(&self) -> u32 {
        self.inner.nonzero_product().code()
    }

    fn __repr__(&self) -> String {
        format!("Field(q={}, modulus={:?})", self.inner.q(), self.inner.modulus())
    }
}

#[pyclass(name = "Oval", frozen)]
struct PyOval {
    inner: Oval,
}

#[pymethods]
impl PyOval {
    #[new]
    fn new(q: u64, points: Vec<Triple>) -> PyResult<Self> {
        let ctx = field(q)?;
        let pts = points
            .into_iter()
            .map(|p| point(&ctx, p))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyOval {
            inner: Oval::new(&ctx, pts).map_err(err)?,
        })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.ctx().q()
    }

    #[getter]
    fn points(&self) -> Vec<Triple> {
        self.inner.points().iter().map(|p| triple(p.codes())).collect()
    }

    fn tangent_at(&self, p: Triple) -> PyResult<Triple> {
        let p = point(self.inner.ctx(), p)?;
        Ok(triple(ovals::tangent_at(&self.inner, &p).map_err(err)?.codes()))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_record()).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __len__(&self) -> usize {
        self.inner.points().len()
    }

    fn __repr__(&self) -> String {
        format!("Oval(q={}, points={:?})", self.q(), self.points())
    }
}

#[pyclass(name = "Conic", frozen)]
struct PyConic {
    inner: Conic,
}

#[pymethods]
impl PyConic {
    #[new]
    fn new(q: u64, form: [u32; 6]) -> PyResult<Self> {
        let ctx = field(q)?;
        Ok(PyConic {
            inner: Conic::from_codes(&ctx, form).map_err(err)?,
        })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.ctx().q()
    }

    #[getter]
    fn form(&self) -> [u32; 6] {
        self.inner.codes()
    }

    fn is_nondegenerate(&self) -> bool {
        self.inner.is_nondegenerate()
    }

    fn contains(&self, p: Triple) -> PyResult<bool> {
        Ok(self.inner.contains(&point(self.inner.ctx(), p)?))
    }

    fn points(&self) -> PyResult<Vec<Triple>> {
        let pts = ovals::conic_points(&self.inner).map_err(err)?;
        Ok(pts.iter().map(|p| triple(p.codes())).collect())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Conic(q={}, form={:?})", self.q(), self.form())
    }
}

#[pyfunction]
fn evaluate(q: u64, coeffs: Vec<u32>, x: u32) -> PyResult<u32> {
    let ctx = field(q)?;
    Ok(polynomial(&ctx, &coeffs)?.evaluate(elem(&ctx, x)?).code())
}

#[pyfunction]
fn derive(q: u64, coeffs: Vec<u32>) -> PyResult<Vec<u32>> {
    let ctx = field(q)?;
    Ok(polynomial(&ctx, &coeffs)?.derive().codes())
}

#[pyfunction]
fn difference_quotient(q: u64, coeffs: Vec<u32>, u: u32) -> PyResult<Vec<u32>> {
    let ctx = field(q)?;
    Ok(polynomial(&ctx, &coeffs)?.difference_quotient(elem(&ctx, u)?).codes())
}

/// Interpolates `values[c]` at the element coded `c`, for every element.
#[pyfunction]
fn interpolate(q: u64, values: Vec<u32>) -> PyResult<Vec<u32>> {
    let ctx = field(q)?;
    let table = values
        .iter()
        .enumerate()
        .map(|(x, &y)| Ok((elem(&ctx, x as u32)?, elem(&ctx, y)?)))
        .collect::<PyResult<_>>()?;
    Ok(poly::interpolate(&ctx, &table).map_err(err)?.codes())
}

#[pyfunction]
fn collinear(q: u64, a: Triple, b: Triple, c: Triple) -> PyResult<bool> {
    let ctx = field(q)?;
    Ok(plane::collinear(
        &ctx,
        &point(&ctx, a)?,
        &point(&ctx, b)?,
        &point(&ctx, c)?,
    ))
}

#[pyfunction]
fn line_through(q: u64, a: Triple, b: Triple) -> PyResult<Triple> {
    let ctx = field(q)?;
    let l = plane::line_through(&ctx, &point(&ctx, a)?, &point(&ctx, b)?).map_err(err)?;
    Ok(triple(l.codes()))
}

#[pyfunction]
fn is_arc(q: u64, points: Vec<Triple>) -> PyResult<bool> {
    let ctx = field(q)?;
    let pts = points
        .into_iter()
        .map(|p| point(&ctx, p))
        .collect::<PyResult<Vec<_>>>()?;
    ovals::is_arc(&ctx, &pts).map_err(err)
}

#[pyfunction]
fn conic_from_five(q: u64, points: [Triple; 5]) -> PyResult<PyConic> {
    let ctx = field(q)?;
    let mut pts = [ProjPoint::from_codes(&ctx, [0, 0, 1]).map_err(err)?; 5];
    for (slot, p) in pts.iter_mut().zip(points) {
        *slot = point(&ctx, p)?;
    }
    Ok(PyConic {
        inner: ovals::conic_from_five(&ctx, &pts).map_err(err)?,
    })
}

#[pyfunction]
fn random_conic(q: u64, seed: u64) -> PyResult<PyConic> {
    let ctx = field(q)?;
    Ok(PyConic {
        inner: ovals::random_conic(&ctx, seed).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (q, mode = "exhaustive", seed = 1, count = 100, workers = 1))]
fn enumerate_ovals(q: u64, mode: &str, seed: u64, count: usize, workers: usize) -> PyResult<Vec<PyOval>> {
    let ctx = field(q)?;
    let mode = match mode {
        "exhaustive" => EnumerationMode::Exhaustive,
        "sampled" => EnumerationMode::Sampled { seed, count },
        other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    let mut opts = EnumerateOptions::new(mode);
    opts.workers = workers;
    Ok(ovals::enumerate_ovals_with(&ctx, &opts)
        .ovals
        .into_iter()
        .map(|inner| PyOval { inner })
        .collect())
}

/// Returns the conic through the oval and the identity report as a dict.
#[pyfunction]
fn segre_reconstruct<'py>(py: Python<'py>, oval: &PyOval) -> PyResult<(PyConic, Bound<'py, PyAny>)> {
    let (conic, report) = reconstruct(&oval.inner).map_err(err)?;
    Ok((PyConic { inner: conic }, json_to_py(py, &report)?))
}

#[pyfunction]
fn identity_report<'py>(py: Python<'py>, q: u64, coeffs: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
    let ctx = field(q)?;
    let af = AffineFunction::from_polynomial(&polynomial(&ctx, &coeffs)?).map_err(err)?;
    json_to_py(py, &report_for(&af).map_err(err)?)
}

#[pyfunction]
fn degree_bound_check(q: u64, k: usize) -> PyResult<bool> {
    Ok(bound_check(&field(q)?, k))
}

#[pymodule]
fn pysegre(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyOval>()?;
    m.add_class::<PyConic>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(difference_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(interpolate, m)?)?;
    m.add_function(wrap_pyfunction!(collinear, m)?)?;
    m.add_function(wrap_pyfunction!(line_through, m)?)?;
    m.add_function(wrap_pyfunction!(is_arc, m)?)?;
    m.add_function(wrap_pyfunction!(conic_from_five, m)?)?;
    m.add_function(wrap_pyfunction!(random_conic, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_ovals, m)?)?;
    m.add_function(wrap_pyfunction!(segre_reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(identity_report, m)?)?;
    m.add_function(wrap_pyfunction!(degree_bound_check, m)?)?;
    Ok(())
}
