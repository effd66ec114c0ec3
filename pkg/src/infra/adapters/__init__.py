"""Infra adapters package"""
