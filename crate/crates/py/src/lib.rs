//! Python bindings. The `api` layer is plain Rust over string-encoded
//! rationals so it can be tested without an interpreter; the `python`
//! module (feature `extension-module`) wraps it with PyO3.

pub mod api {
    use grc_core::brackets::{
        bracket_from_singular, equivariance_report, ex1_bracket, BilinOp, Subalgebra,
    };
    use grc_core::gl11::{level1_highest, tensor_case as core_tensor_case};
    use grc_core::induced::Algebra;
    use grc_core::rat::{fmt_rat, parse_rat, Rat};
    use grc_core::singular::{predict_dimension, singular_space};
    use grc_core::tables::{emit_table, scan_classify, Format, ScanConfig};
    use grc_core::Result;
    use serde_json::json;

    fn cell(algebra: &str, mu1: &str, mu2: &str) -> Result<(Algebra, Rat, Rat)> {
        Ok((Algebra::parse(algebra)?, parse_rat(mu1)?, parse_rat(mu2)?))
    }

    /// Singular vectors of one level, as display strings per sector.
    #[derive(Debug, Clone)]
    pub struct Singular {
        pub even: Vec<String>,
        pub odd: Vec<String>,
        pub json: serde_json::Value,
    }

    pub fn singular(algebra: &str, mu1: &str, mu2: &str, order: u32) -> Result<Singular> {
        let (a, m1, m2) = cell(algebra, mu1, mu2)?;
        let sp = singular_space(a, &m1, &m2, order)?;
        Ok(Singular {
            even: sp.even.iter().map(|v| v.to_string()).collect(),
            odd: sp.odd.iter().map(|v| v.to_string()).collect(),
            json: sp.to_json(),
        })
    }

    pub fn brackets(algebra: &str, mu1: &str, mu2: &str, order: u32) -> Result<Vec<BilinOp>> {
        let (a, m1, m2) = cell(algebra, mu1, mu2)?;
        let sp = singular_space(a, &m1, &m2, order)?;
        sp.even
            .iter()
            .chain(&sp.odd)
            .map(bracket_from_singular)
            .collect()
    }

    pub fn ex1(a: &str, b: &str) -> Result<BilinOp> {
        ex1_bracket(&parse_rat(a)?, &parse_rat(b)?)
    }

    /// `(checks, failures)` of the equivariance oracle.
    pub fn verify(op: &BilinOp, subalgebra: &str, degree_bound: u32) -> Result<(usize, usize)> {
        let rep = equivariance_report(op, Subalgebra::parse(subalgebra)?, degree_bound)?;
        Ok((rep.checks, rep.failures.len()))
    }

    pub fn predict(
        algebra: &str,
        mu1: &str,
        mu2: &str,
        order: u32,
    ) -> Result<(usize, usize, String)> {
        let (a, m1, m2) = cell(algebra, mu1, mu2)?;
        let p = predict_dimension(a, &m1, &m2, order);
        Ok((p.even, p.odd, p.case))
    }

    pub fn classify(
        algebra: &str,
        mus: &[String],
        orders: (u32, u32),
        format: &str,
    ) -> Result<String> {
        let mus = mus
            .iter()
            .map(|m| parse_rat(m))
            .collect::<Result<Vec<_>>>()?;
        let cfg = ScanConfig::new(Algebra::parse(algebra)?, mus, orders);
        emit_table(&scan_classify(&cfg)?.records, Format::parse(format)?)
    }

    pub fn tensor_case(
        lambda: &str,
        mu: &str,
        sigma: &str,
        rho: &str,
    ) -> Result<serde_json::Value> {
        let [l, m, s, r] = [lambda, mu, sigma, rho].map(parse_rat);
        let (l, m, s, r) = (l?, m?, s?, r?);
        let rays: Vec<_> = level1_highest(&l, &m, &s, &r)
            .into_iter()
            .map(|(x, y)| json!({"x": fmt_rat(&x), "y": fmt_rat(&y)}))
            .collect();
        Ok(json!({"case": core_tensor_case(&l, &m, &s, &r), "level1_highest": rays}))
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn contact_level_two_is_one_dimensional() {
            let s = singular("k11", "1/3", "2/5", 2).unwrap();
            assert_eq!((s.even.len(), s.odd.len()), (1, 0));
            assert_eq!(s.json["algebra"], "k11");
        }

        #[test]
        fn brackets_pass_the_oracle() {
            for op in brackets("vect11", "0", "2", 2).unwrap() {
                assert_eq!(verify(&op, "pgl21", 4).unwrap().1, 0);
            }
            let op = ex1("2", "-3").unwrap();
            assert_eq!(verify(&op, "k11-full", 4).unwrap().1, 0);
        }

        #[test]
        fn classify_emits_csv() {
            let csv = classify("vect11", &["0".into(), "2".into()], (1, 2), "csv").unwrap();
            assert_eq!(csv.lines().count(), 1 + 8);
            assert_eq!(
                predict("vect11", "0", "0", 2).unwrap(),
                (1, 1, "ThMain-i".into())
            );
        }

        #[test]
        fn bad_input_is_an_error() {
            assert!(singular("osp", "0", "0", 1).is_err());
            assert!(singular("k11", "1/0", "0", 1).is_err());
            assert!(tensor_case("1", "0", "x", "0").is_err());
        }
    }
}

#[cfg(feature = "extension-module")]
mod python {
    use pyo3::exceptions::PyValueError;
    use pyo3::prelude::*;

    use grc_core::brackets::BilinOp;
    use grc_core::rat::fmt_rat;
    use grc_core::GrcError;

    use crate::api;

    fn err(e: GrcError) -> PyErr {
        PyValueError::new_err(e.to_string())
    }

    fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
        py.import("json")?.call_method1("loads", (v.to_string(),))
    }

    #[pyclass(name = "SingularSpace", frozen)]
    struct PySingular(api::Singular);

    #[pymethods]
    impl PySingular {
        #[getter]
        fn even(&self) -> Vec<String> {
            self.0.even.clone()
        }

        #[getter]
        fn odd(&self) -> Vec<String> {
            self.0.odd.clone()
        }

        fn dims(&self) -> (usize, usize) {
            (self.0.even.len(), self.0.odd.len())
        }

        fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
            to_py(py, &self.0.json)
        }

        fn __repr__(&self) -> String {
            format!(
                "SingularSpace(dim {}|{})",
                self.0.even.len(),
                self.0.odd.len()
            )
        }
    }

    #[pyclass(name = "Bracket", frozen)]
    struct PyBracket(BilinOp);

    #[pymethods]
    impl PyBracket {
        #[getter]
        fn lambda1(&self) -> String {
            fmt_rat(&self.0.lambda1)
        }

        #[getter]
        fn lambda2(&self) -> String {
            fmt_rat(&self.0.lambda2)
        }

        #[getter]
        fn level(&self) -> u32 {
            self.0.level
        }

        fn formula(&self) -> String {
            self.0.formula()
        }

        /// Returns `(checks, failures)`.
        fn verify(&self, subalgebra: &str, degree_bound: u32) -> PyResult<(usize, usize)> {
            api::verify(&self.0, subalgebra, degree_bound).map_err(err)
        }

        fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
            to_py(py, &self.0.to_json())
        }

        fn __repr__(&self) -> String {
            format!("Bracket({})", self.0.formula())
        }
    }

    #[pyfunction]
    fn singular(algebra: &str, mu1: &str, mu2: &str, order: u32) -> PyResult<PySingular> {
        api::singular(algebra, mu1, mu2, order)
            .map(PySingular)
            .map_err(err)
    }

    #[pyfunction]
    fn brackets(algebra: &str, mu1: &str, mu2: &str, order: u32) -> PyResult<Vec<PyBracket>> {
        Ok(api::brackets(algebra, mu1, mu2, order)
            .map_err(err)?
            .into_iter()
            .map(PyBracket)
            .collect())
    }

    #[pyfunction]
    fn ex1(a: &str, b: &str) -> PyResult<PyBracket> {
        api::ex1(a, b).map(PyBracket).map_err(err)
    }

    #[pyfunction]
    fn predict(
        algebra: &str,
        mu1: &str,
        mu2: &str,
        order: u32,
    ) -> PyResult<(usize, usize, String)> {
        api::predict(algebra, mu1, mu2, order).map_err(err)
    }

    #[pyfunction]
    fn classify(
        algebra: &str,
        mus: Vec<String>,
        orders: (u32, u32),
        format: &str,
    ) -> PyResult<String> {
        api::classify(algebra, &mus, orders, format).map_err(err)
    }

    #[pyfunction]
    fn tensor_case<'py>(
        py: Python<'py>,
        lambda: &str,
        mu: &str,
        sigma: &str,
        rho: &str,
    ) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &api::tensor_case(lambda, mu, sigma, rho).map_err(err)?)
    }

    #[pymodule]
    fn grc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
        m.add_class::<PySingular>()?;
        m.add_class::<PyBracket>()?;
        m.add_function(wrap_pyfunction!(singular, m)?)?;
        m.add_function(wrap_pyfunction!(brackets, m)?)?;
        m.add_function(wrap_pyfunction!(ex1, m)?)?;
        m.add_function(wrap_pyfunction!(predict, m)?)?;
        m.add_function(wrap_pyfunction!(classify, m)?)?;
        m.add_function(wrap_pyfunction!(tensor_case, m)?)?;
        Ok(())
    }
}
