#pragma once

#include "gridspec/address.hpp"
#include "gridspec/analyzer.hpp"
#include "gridspec/ast.hpp"
#include "gridspec/emit.hpp"
#include "gridspec/evaluator.hpp"
#include "gridspec/layout.hpp"
#include "gridspec/lexer.hpp"
#include "gridspec/parser.hpp"
#include "gridspec/source.hpp"
#include "gridspec/value.hpp"
#include "gridspec/verify.hpp"
