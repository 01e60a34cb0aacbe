#ifndef ART9_ERROR_HPP
#define ART9_ERROR_HPP

#include <stdexcept>
#include <string>

namespace art9 {

// Base class for all toolchain-domain errors. CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Instruction word whose opcode falls in a reserved region.
class IllegalInstruction : public Error {
public:
    explicit IllegalInstruction(const std::string& msg) : Error(msg) {}
};

// Assembly / transpiler source errors (carry a line number in the message).
class SourceError : public Error {
public:
    using Error::Error;
};

// Simulation hit max-cycles before the program halted.
class TimeoutError : public Error {
public:
    using Error::Error;
};

// Illegal instruction reached by the committed execution path.
class TrapError : public Error {
public:
    using Error::Error;
};

} // namespace art9

#endif
