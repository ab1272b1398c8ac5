#ifndef CONICFIB_ERRORS_HPP
#define CONICFIB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace conicfib {

/// A caller violated a documented precondition.
class ContractError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// An exact integer result does not fit the representable width.
class OverflowError : public std::overflow_error
{
  public:
    using std::overflow_error::overflow_error;
};

/// A computation exceeded its configured resource budget.
class BudgetError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Factorization did not complete within its iteration budget.
class FactorizationError : public BudgetError
{
  public:
    using BudgetError::BudgetError;
};

} // namespace conicfib

#endif
