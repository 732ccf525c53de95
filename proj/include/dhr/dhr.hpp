#ifndef DHR_DHR_HPP
#define DHR_DHR_HPP

// Stability radii of dissipative-Hamiltonian systems x' = (J - R) Q x:
// unstructured and structure-preserving radii with perturbation certificates,
// eigenvalue backward errors, and optimally robust DH representations of
// stable matrices.

#include "dhr/core.hpp"
#include "dhr/numerics.hpp"
#include "dhr/model.hpp"
#include "dhr/mapping.hpp"
#include "dhr/omega.hpp"
#include "dhr/radius_unstructured.hpp"
#include "dhr/radius_si.hpp"
#include "dhr/radius_sd.hpp"
#include "dhr/radius_s.hpp"
#include "dhr/robust.hpp"

#endif  // DHR_DHR_HPP
