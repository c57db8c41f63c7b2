# src module
