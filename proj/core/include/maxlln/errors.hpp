#pragma once

#include <stdexcept>
#include <string>

namespace maxlln {

/// Error classes map onto the CLI exit codes: configuration problems exit 2,
/// data problems exit 3, numerical failures exit 4.
enum class ErrorClass { config, data, numerical, resource };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    [[nodiscard]] ErrorClass error_class() const noexcept { return cls_; }

private:
    ErrorClass cls_;
};

/// Invalid configuration or violated precondition on an argument.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorClass::config, what) {}
};

class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& what) : Error(ErrorClass::config, what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorClass::config, what) {}
};

/// A moment of the requested order does not exist for the innovation law.
class HeavyTailError : public Error {
public:
    explicit HeavyTailError(const std::string& what) : Error(ErrorClass::data, what) {}
};

class DegenerateDataError : public Error {
public:
    explicit DegenerateDataError(const std::string& what) : Error(ErrorClass::data, what) {}
};

class SingularDesignError : public Error {
public:
    SingularDesignError(const std::string& what, double condition_number)
        : Error(ErrorClass::data, what), condition_(condition_number) {}
    [[nodiscard]] double condition_number() const noexcept { return condition_; }

private:
    double condition_;
};

class CollinearityError : public Error {
public:
    CollinearityError(const std::string& what, std::size_t coordinate)
        : Error(ErrorClass::data, what), coordinate_(coordinate) {}
    /// Zero-based index of the offending tested covariate.
    [[nodiscard]] std::size_t coordinate() const noexcept { return coordinate_; }

private:
    std::size_t coordinate_;
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorClass::numerical, what) {}
};

class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error(ErrorClass::resource, what) {}
};

}  // namespace maxlln
