#pragma once

namespace packfem {

/// Serial is the reference; Parallel runs the OpenMP variant of a kernel.
enum class Exec { Serial, Parallel };

}  // namespace packfem
