#pragma once

#include <stdexcept>
#include <string>

namespace dca {

// Base class for all domain errors thrown by the library. Callers that do not
// care about the specific failure can catch dca::Error; tests and the CLI
// distinguish the concrete types below.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define DCA_ERROR_TYPE(Name)                               \
    class Name : public Error {                            \
    public:                                                \
        explicit Name(const std::string& msg) : Error(msg) {} \
    };

// lattice
DCA_ERROR_TYPE(EmptyLattice)
DCA_ERROR_TYPE(InvalidStep)
DCA_ERROR_TYPE(NotBipartite)
DCA_ERROR_TYPE(NotOnBoundary)
DCA_ERROR_TYPE(ParseError)
DCA_ERROR_TYPE(ValidationError)
DCA_ERROR_TYPE(DegenerateFace)

// operators
DCA_ERROR_TYPE(SingularFace)
DCA_ERROR_TYPE(DegenerateDiagonal)

// solver
DCA_ERROR_TYPE(SolverDiverged)
DCA_ERROR_TYPE(NotHarmonic)
DCA_ERROR_TYPE(NotAnalytic)
DCA_ERROR_TYPE(NotOrthogonal)
DCA_ERROR_TYPE(InconsistentBoundaryData)

// fem
DCA_ERROR_TYPE(DegenerateTriangle)
DCA_ERROR_TYPE(NotDelaunay)
DCA_ERROR_TYPE(IrregularBoundary)
DCA_ERROR_TYPE(DegenerateCircumcenter)

// measure
DCA_ERROR_TYPE(NotAnArc)
DCA_ERROR_TYPE(InvalidWalkConfig)
DCA_ERROR_TYPE(WalkCapExceeded)

// analysis
DCA_ERROR_TYPE(BoxOutsideLattice)
DCA_ERROR_TYPE(MarginTooSmall)

// cli / expressions
DCA_ERROR_TYPE(SyntaxError)
DCA_ERROR_TYPE(NonRealResult)
DCA_ERROR_TYPE(IoError)

#undef DCA_ERROR_TYPE

} // namespace dca
